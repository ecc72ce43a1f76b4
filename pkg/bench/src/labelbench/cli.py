import argparse
import ast
import sys

from labelbench.bench import CLASSIFIERS, bench


def _parse_overrides(pairs):
    overrides = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ValueError(f"override '{pair}' is not key=value")
        key, raw = pair.split("=", 1)
        try:
            overrides[key] = ast.literal_eval(raw)
        except (ValueError, SyntaxError):
            overrides[key] = raw
    return overrides


def build_parser():
    parser = argparse.ArgumentParser(
        prog="labelbench",
        description="Benchmark reference classifiers on exported "
                    "feature/label tables.")
    parser.add_argument("--features", required=True)
    parser.add_argument("--labels", required=True)
    parser.add_argument("--classifier", default="all",
                        choices=CLASSIFIERS + ("all",))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default=".")
    parser.add_argument("--set", dest="overrides", action="append",
                        metavar="KEY=VALUE",
                        help="hyperparameter override, may repeat")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    names = CLASSIFIERS if args.classifier == "all" else (args.classifier,)
    try:
        overrides = _parse_overrides(args.overrides)
        for name in names:
            run = bench(args.features, args.labels, name, seed=args.seed,
                        out_dir=args.out_dir, overrides=overrides or None)
            print(f"{name}: accuracy {run.metrics['accuracy']:.4f} "
                  f"on {run.test_size} test nodes -> {run.image_path}")
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
