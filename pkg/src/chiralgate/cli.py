"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 physics-singularity error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ScenarioConfig, load_config, validate_config
from .errors import ConfigError, SingularScheduleError
from .scenarios import (dump_pulses, export_qasm, ingest_counts,
                        molecule_report, run_scenario, sweep_trotter, _write)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralgate",
        description="Compile and simulate chirality-discriminating "
                    "STIRAP/STAP protocols on two qubits.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML scenario config")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="RNG seed (overrides config)")
        p.add_argument("--steps", type=int, help="Trotter steps (overrides config)")
        p.add_argument("--protocol", choices=["stirap", "stap"])
        p.add_argument("--enantiomer", choices=["L", "R", "both"])
        p.add_argument("--erratum-s-gate", action="store_true",
                       help="compile the Stokes step with the XX+YY "
                            "construction that couples |01>/|10| instead")
        return p

    common(sub.add_parser("run", help="oracle + circuit runs, traces, report"))
    p = common(sub.add_parser("sweep-trotter", help="circuit-vs-oracle error table"))
    p.add_argument("--steps-list", default="10,20,40,80",
                   help="comma-separated Trotter step counts")
    common(sub.add_parser("export-qasm", help="emit OpenQASM 2.0 circuits"))
    p = common(sub.add_parser("ingest-counts",
                              help="validate hardware counts and compare"))
    p.add_argument("counts_json", help="path to counts JSON file")
    common(sub.add_parser("dump-pulses", help="CSV of continuous drive amplitudes"))
    common(sub.add_parser("molecule-check", help="rotor-constant consistency report"))
    return parser


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else validate_config({})
    if args.out is not None:
        cfg.out_dir = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.steps is not None:
        if args.steps < 2:
            raise ConfigError("--steps must be >= 2")
        cfg.n_steps = args.steps
    if args.protocol is not None and args.protocol != cfg.protocol:
        cfg.protocol = args.protocol
        cfg.pulses = {}  # pulse keys are protocol-specific
    if args.enantiomer is not None:
        cfg.enantiomer = args.enantiomer
    if args.erratum_s_gate:
        cfg.erratum_s_gate = True
    cfg.build_schedule()
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "run":
            report = run_scenario(cfg, cfg.out_dir)
            if hasattr(report, "final_d"):
                print(f"protocol={cfg.protocol} final D = {report.final_d():.6f}")
                for t, row in report.checkpoints.items():
                    print(f"  checkpoint t={t:g} us: L p10={row['L'][2]:.4f} "
                          f"R p10={row['R'][2]:.4f} D={row['D']:.4f}")
            print(f"outputs written to {cfg.out_dir}")
        elif args.command == "sweep-trotter":
            steps = [int(s) for s in args.steps_list.split(",") if s.strip()]
            table = sweep_trotter(cfg, steps)
            print("n,max_dev,final_dev")
            for row in table["rows"]:
                print("%d,%.6g,%.6g" % (row["n"], row["max_dev"], row["final_dev"]))
            print(f"fitted log-log slope: {table['slope']:.3f}")
        elif args.command == "export-qasm":
            for path in export_qasm(cfg, cfg.out_dir):
                print(path)
        elif args.command == "ingest-counts":
            try:
                with open(args.counts_json) as fh:
                    raw = json.load(fh)
            except OSError as exc:
                print(f"I/O error: {exc}", file=sys.stderr)
                return EXIT_IO
            except json.JSONDecodeError as exc:
                raise ConfigError(f"malformed counts JSON: {exc}") from exc
            result = ingest_counts(raw)
            print(json.dumps(result, indent=2, sort_keys=True))
        elif args.command == "dump-pulses":
            text = dump_pulses(cfg)
            import os
            os.makedirs(cfg.out_dir, exist_ok=True)
            path = os.path.join(cfg.out_dir, f"pulses_{cfg.protocol}.csv")
            _write(path, text)
            print(path)
        elif args.command == "molecule-check":
            result = molecule_report(cfg)
            print(json.dumps(result, indent=2, sort_keys=True))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularScheduleError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
