"""Command-line front end.

    hpmsim efield --range 5..100 --step 5
    hpmsim montecarlo --range 20..40 --step 5 --seed 42 --format json
    hpmsim --reproduce-paper --out results/

Exit status: 0 success, 2 usage error, 3 invalid scenario or argument value,
4 runtime/I-O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .commands import COMMANDS, RunOptions, dispatch
from .physics import DomainError
from .scenario import ScenarioError, load_scenario
from .tables import emit, write_table

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4

log = logging.getLogger("hpmsim")


def _range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            v = float(text)
            return v, v
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or a single number, got {text!r}") from None


def _on_off(text: str) -> bool:
    if text.lower() in ("on", "true", "1", "yes"):
        return True
    if text.lower() in ("off", "false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected on or off, got {text!r}")


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hpmsim",
        description="High-power-microwave counter-UAS simulation: link budget, damage "
        "probability, Monte Carlo campaigns and design studies as CSV/JSON tables.",
    )
    p.add_argument("command", nargs="?", choices=COMMANDS, help="study to run")
    p.add_argument("--config", metavar="PATH", help="scenario file (TOML)")
    p.add_argument("--seed", type=_u64, help="Monte Carlo seed (default 42)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per range")
    p.add_argument("--range", type=_range, metavar="A..B", help="range sweep in metres")
    p.add_argument("--step", type=float, help="range step in metres")
    p.add_argument("--duty", type=float, help="duty cycle in (0, 1]")
    p.add_argument("--line-loss", type=_on_off, metavar="on|off", help="apply waveguide/feed/radome losses")
    p.add_argument("--variant", choices=("listing2", "full"), help="Monte Carlo damage model")
    p.add_argument("--target", type=float, default=0.9, help="kill probability for kill-range studies")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="worker threads")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p.add_argument("--out", metavar="PATH", help="output file, or directory for multi-table output")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp metadata line")
    p.add_argument("--reproduce-paper", action="store_true", help="write every reference study to --out")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _write(tables, fmt: str, out: str | None) -> None:
    if out is None:
        chunks = [emit(t, fmt) for t in tables]
        if fmt == "json" and len(chunks) > 1:
            sys.stdout.write("[\n" + ",\n".join(c.decode().rstrip("\n") for c in chunks) + "\n]\n")
        else:
            sys.stdout.write("\n".join(c.decode() for c in chunks))
        return
    path = Path(out)
    if len(tables) == 1 and not path.is_dir() and not out.endswith(("/", os.sep)):
        write_table(tables[0], path, fmt)
        return
    path.mkdir(parents=True, exist_ok=True)
    for t in tables:
        write_table(t, path / f"{t.name}.{fmt}", fmt)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")

    if args.command is None and not args.reproduce_paper:
        parser.print_usage(sys.stderr)
        print("hpmsim: error: a command or --reproduce-paper is required", file=sys.stderr)
        return EXIT_USAGE

    try:
        scenario = load_scenario(args.config)
        opts = RunOptions(
            range=args.range,
            step=args.step,
            duty=args.duty,
            line_loss=args.line_loss,
            variant=args.variant,
            seed=args.seed,
            trials=args.trials,
            workers=max(1, args.workers),
            target=args.target,
            timestamp=not args.no_timestamp,
        )
        if opts.trials is not None and opts.trials < 1:
            raise DomainError("--trials must be >= 1")
        if not 0.0 < opts.target < 1.0:
            raise DomainError("--target must lie in (0, 1)")
        fmt = args.format or scenario.output_format
        out = args.out or scenario.output_path

        if args.reproduce_paper:
            from .reproduce import reproduce_all

            outdir = out or "reproduction"
            paths = reproduce_all(scenario, outdir, opts, fmt)
            log.info("wrote %d tables to %s", len(paths), outdir)
            print(f"wrote {len(paths)} tables to {outdir}", file=sys.stderr)
            return EXIT_OK

        tables = dispatch(args.command, scenario, opts)
        _write(tables, fmt, out)
    except (ScenarioError, DomainError) as exc:
        print(f"hpmsim: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"hpmsim: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
