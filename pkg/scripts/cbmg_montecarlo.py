"""Check CBMG visit ratios against simulated sessions.

Draws random absorbing navigation chains, solves each for expected visits
per session and compares with the average over simulated random walks.

    python3 scripts/cbmg_montecarlo.py --chains 20 --walks 1000000
"""

import argparse
import time

import numpy as np

from perfkit import workload


def random_chain(rng: np.random.Generator, states: int) -> np.ndarray:
    """Entry state 0, exit state ``states``; every state leaves with some probability."""
    p = np.zeros((states + 1, states + 1))
    for i in range(states):
        leave = rng.uniform(0.15, 0.4)
        p[i, 1:states] = rng.dirichlet(np.full(states - 1, 3.0)) * (1 - leave)
        p[i, states] = leave
    return p


def simulate(p: np.ndarray, walks: int, rng: np.random.Generator) -> np.ndarray:
    """Mean visits per state over ``walks`` sessions, advanced in lockstep."""
    exit_state = p.shape[0] - 1
    cum = np.cumsum(p, axis=1)
    cum[:, -1] = 1.0
    counts = np.zeros(p.shape[0])
    state = np.zeros(walks, dtype=int)
    while state.size:
        counts += np.bincount(state, minlength=p.shape[0])
        state = (rng.random(state.size)[:, None] >= cum[state]).sum(axis=1)
        state = state[state != exit_state]
    return counts[:-1] / walks


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--chains", type=int, default=20)
    ap.add_argument("--walks", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=99)
    a = ap.parse_args()

    rng = np.random.default_rng(a.seed)
    worst = 0.0
    t0 = time.perf_counter()
    print("chain states max_rel_error session_length")
    for c in range(a.chains):
        p = random_chain(rng, int(rng.integers(3, 7)))
        model = workload.CBMG(p)
        exact = workload.cbmg_visit_rates(model)
        err = float(np.max(np.abs(simulate(p, a.walks, rng) - exact) / exact))
        worst = max(worst, err)
        print(f"{c:5d} {p.shape[0] - 1:6d} {err:13.5f} {workload.session_length(model):14.4f}")
    print(f"worst {worst:.5f} in {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
