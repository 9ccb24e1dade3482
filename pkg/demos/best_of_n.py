"""Repeat an embedding over tie permutations and extrapolate the best score.

    python3 demos/best_of_n.py [--trials 60]

Nodes of equal degree can be ranked in any order when radii are assigned.
Each trial draws a new order. The best-so-far curves are fitted with the
expected extreme of n normal samples, which predicts what more trials buy.
"""
import argparse

import numpy as np

import hyperemb as he


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=60)
    ap.add_argument("--method", choices=he.METHODS, default="ncmce-opt")
    args = ap.parse_args()

    g = he.football_standin()
    print(f"football stand-in: N={g.n_nodes}, <k>={2 * g.n_edges / g.n_nodes:.3f}, "
          f"min degree {g.degree.min()}")
    p = he.fit_params(g, tie_seed=0)
    res = he.repeat_embeddings(g, args.method, p, args.trials, seed=1)

    fit_ll = he.fit_best_of_n(res.series("ll"), "min")
    fit_gr = he.fit_best_of_n(res.series("gr"), "max")
    print(f"LL: mu={fit_ll.mu:.2f} sigma={fit_ll.sigma:.2f} R^2={fit_ll.r_squared:.3f}")
    print(f"GR: mu={fit_gr.mu:.4f} sigma={fit_gr.sigma:.4f} R^2={fit_gr.r_squared:.3f}")
    print(f"{'n_s':>6} {'best LL':>9} {'fit':>9} {'best GR':>8} {'fit':>8}")
    for n in (2, 5, 10, 20, args.trials):
        if n <= args.trials:
            print(f"{n:6d} {res.best_ll[n - 1]:9.2f} {fit_ll.predict(n):9.2f} "
                  f"{res.best_gr[n - 1]:8.4f} {fit_gr.predict(n):8.4f}")
    for n in (100, 1000):
        print(f"{n:6d} {'':>9} {fit_ll.predict(n):9.2f} {'':>8} {fit_gr.predict(n):8.4f}")


if __name__ == "__main__":
    main()
