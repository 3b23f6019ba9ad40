"""
Command line entry point.

    gcrewe run   --synth-nodes 500 --synth-permute --noise 0 --out report.json
    gcrewe run   --edgelist1 a.txt --edgelist2 b.txt --truth truth.txt --out report.json
    gcrewe grid  --synth-nodes 500 --synth-permute --levels 0,0.01,0.02 --out grid.csv
    gcrewe synth --synth-nodes 500 --edge-noise 0.01 --out-dir problem/
"""
import argparse
import csv
import json
import logging
import os
import sys

from .pipeline import RunConfig, StageError, build_problem, run_align, run_grid
from .graph import write_attributes, write_edge_list
from .synth import write_truth


def _int_list(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _add_common(p):
    d = RunConfig()
    io = p.add_argument_group("inputs")
    io.add_argument("--edgelist1")
    io.add_argument("--edgelist2")
    io.add_argument("--attrs1")
    io.add_argument("--attrs2")
    io.add_argument("--truth", help="two-column file 'label1 label2'")
    io.add_argument("--synth-permute", action="store_true", help="G2 = random permutation of G1")
    io.add_argument("--synth-nodes", type=int, help="generate G1 as a preferential-attachment graph")
    io.add_argument("--synth-m", type=int, default=d.synth_m, help="edges per new node when generating")
    io.add_argument("--synth-attrs", type=int, default=d.synth_attrs, help="number of synthetic binary attributes")
    io.add_argument("--edge-noise", "--noise", dest="edge_noise", type=float, default=d.edge_noise)
    io.add_argument("--attr-noise", type=float, default=d.attr_noise)

    hp = p.add_argument_group("hyper-parameters")
    hp.add_argument("--K", type=int, default=d.K, help="max hop distance")
    hp.add_argument("--gamma", type=float, default=d.gamma, help="hop discount factor")
    hp.add_argument("--phi", type=float, default=d.phi, help="compression ratio")
    hp.add_argument("--eta", type=int, default=d.eta, help="guiding-list degree threshold")
    hp.add_argument("--lam", "--lambda", dest="lam", type=int, default=d.lam, help="fast-pairing scan width")
    hp.add_argument("--omega", type=float, default=d.omega, help="fast-pairing similarity threshold")
    hp.add_argument("--hidden", "--h", dest="hidden", type=int, default=d.hidden)
    hp.add_argument("--dim", "--p", dest="dim", type=int, default=None, help="embedding size (default 2*m)")
    hp.add_argument("--layers", type=int, default=d.layers)
    hp.add_argument("--activation", choices=["tanh", "relu"], default=d.activation)
    hp.add_argument("--gamma1", type=float, default=d.gamma1)
    hp.add_argument("--gamma2", type=float, default=d.gamma2)
    hp.add_argument("--alpha", type=_int_list, default=d.alphas, help="comma list, e.g. 1,5,10")
    hp.add_argument("--beta", type=int, default=d.beta, help="supernode expansion width")
    mode = hp.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", dest="kdtree", action="store_false", default=None)
    mode.add_argument("--kdtree", dest="kdtree", action="store_true")

    sd = p.add_argument_group("seeds")
    sd.add_argument("--seed-graph", type=int, default=d.seed_graph)
    sd.add_argument("--seed-weights", type=int, default=d.seed_weights)
    sd.add_argument("--seed-perm", type=int, default=d.seed_perm)
    sd.add_argument("--seed-noise", type=int, default=d.seed_noise)
    sd.add_argument("--seed", type=int, default=None, help="set all seeds at once")
    p.add_argument("-v", "--verbose", action="store_true")


def _config(args, **over) -> RunConfig:
    if args.seed is not None:
        seeds = {k: args.seed for k in ("seed_graph", "seed_weights", "seed_perm", "seed_noise")}
    else:
        seeds = {k: getattr(args, k) for k in ("seed_graph", "seed_weights", "seed_perm", "seed_noise")}
    kw = dict(
        edgelist1=args.edgelist1, edgelist2=args.edgelist2, attrs1=args.attrs1, attrs2=args.attrs2,
        truth=args.truth, synth_permute=args.synth_permute, synth_nodes=args.synth_nodes,
        synth_m=args.synth_m, synth_attrs=args.synth_attrs, edge_noise=args.edge_noise,
        attr_noise=args.attr_noise, K=args.K, gamma=args.gamma, hidden=args.hidden, dim=args.dim,
        layers=args.layers, activation=args.activation, phi=args.phi, eta=args.eta, lam=args.lam,
        omega=args.omega, gamma1=args.gamma1, gamma2=args.gamma2, alphas=tuple(args.alpha),
        beta=args.beta, kdtree=args.kdtree, **seeds,
    )
    kw.update(over)
    return RunConfig(**kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcrewe", description="Network alignment with embedding-guided compression")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="align two graphs and write a JSON report")
    _add_common(run)
    run.add_argument("--trials", type=int, default=1)
    run.add_argument("--out", help="report path (default: stdout)")
    run.add_argument("--dump-features")
    run.add_argument("--dump-embeddings")
    run.add_argument("--dump-supernodes", help="path prefix; writes <prefix>.g1 and <prefix>.g2")

    grid = sub.add_parser("grid", help="cumulative edge-noise sweep, CSV output")
    _add_common(grid)
    grid.add_argument("--levels", type=_float_list, required=True, help="nondecreasing, e.g. 0,0.01,0.02")
    grid.add_argument("--trials", type=int, default=5)
    grid.add_argument("--out", help="CSV path (default: stdout)")

    syn = sub.add_parser("synth", help="write a permuted (noisy) problem to edge-list files")
    _add_common(syn)
    syn.add_argument("--out-dir", required=True)
    return parser


def _write_grid(rows, fh):
    keys = list(rows[0])
    w = csv.DictWriter(fh, fieldnames=keys)
    w.writeheader()
    for r in rows:
        w.writerow(r)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = _config(args, trials=args.trials, out=args.out).validate()
            dumps = {"features": args.dump_features, "embeddings": args.dump_embeddings,
                     "supernodes": args.dump_supernodes}
            report = run_align(cfg, dumps)
            text = json.dumps(report, indent=1)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text + "\n")
            else:
                print(text)
        elif args.command == "grid":
            cfg = _config(args, trials=args.trials, out=args.out, synth_permute=True)
            rows = run_grid(cfg.validate(), args.levels)
            if args.out:
                with open(args.out, "w", newline="") as fh:
                    _write_grid(rows, fh)
            else:
                _write_grid(rows, sys.stdout)
        else:
            cfg = _config(args, synth_permute=True).validate()
            problem = build_problem(cfg)
            os.makedirs(args.out_dir, exist_ok=True)
            join = lambda name: os.path.join(args.out_dir, name)
            write_edge_list(problem.g1, join("g1.edges"))
            write_edge_list(problem.g2, join("g2.edges"))
            write_truth(problem.truth, problem.g1, problem.g2, join("truth.txt"))
            if problem.g1.attributes is not None:
                write_attributes(problem.g1, join("g1.attrs"))
                write_attributes(problem.g2, join("g2.attrs"))
    except StageError as exc:
        print(f"gcrewe: error in stage '{exc.stage}': {exc.cause}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"gcrewe: error in stage 'config': {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
