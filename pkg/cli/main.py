import argparse
import json
import logging
import os
import sys

from cli import __version__, paths, serializers
from cli.calibration import CalibrationError, ingest_calibration
from cli.constants import (
    ARRANGEMENTS,
    DECODER_MODES,
    EXIT_CONFIG_ERROR,
    EXIT_DATA_ERROR,
    EXIT_OK,
    EXIT_RUNTIME_ERROR,
    NOISE_MODELS,
    RANK_KEYS,
    SELECT_BEST,
    SELECT_RANDOM,
)
from cli.core import ExperimentController, ingest_summary
from cli.schemas import ExperimentConfig

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s"
)

SIMULATION_VERBS = ("sweep", "pseudothreshold", "ensemble", "optimize-layout")

# argparse dest -> ExperimentConfig field, for flags that override --config.
CONFIG_FLAGS = {
    "seed": "seed",
    "distance": "distances",
    "decoder": "decoders",
    "noise": "noise_model",
    "arrangement": "arrangement",
    "arrangement_seed": "arrangement_seed",
    "layout": "layout",
    "rank_key": "rank_key",
    "t_ref": "t_ref_us",
    "selection": "selection",
    "n_arrangements": "n_arrangements",
    "p_grid": "p_grid",
    "t_grid": "t_grid",
    "trials": "n_trials",
    "adaptive": "adaptive",
    "max_trials": "max_trials",
    "calibration": "calibration",
    "symmetric_t": "symmetric_t_us",
    "iid_reference": "iid_reference",
    "breakdown": "breakdown",
    "plot": "plot",
    "workers": "workers",
}


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _wrap(fn, *args, **kwargs) -> int:
    """Call a verb, converting exceptions to process exit codes."""
    try:
        fn(*args, **kwargs)
        return EXIT_OK
    except CalibrationError as e:
        logging.error("Calibration error: %s", e)
        return EXIT_DATA_ERROR
    except ValueError as e:
        logging.error("Configuration error: %s", e)
        return EXIT_CONFIG_ERROR
    except (RuntimeError, OSError) as e:
        logging.error("Run failed: %s", e)
        return EXIT_RUNTIME_ERROR
    except Exception as e:
        logging.exception("Unexpected failure: %s", e)
        return EXIT_RUNTIME_ERROR


def _load_config_file(path: str) -> dict:
    """A config JSON, or a summary JSON whose ``config`` key is reused."""
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return data.get("config", data)


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        values.update(_load_config_file(args.config))
    for dest, field_name in CONFIG_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            values[field_name] = value
    values["output_dir"] = args.output_dir
    return ExperimentConfig(**values)


def _print(data: dict) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def run_ingest(args: argparse.Namespace) -> None:
    summary = ingest_summary(args.path)
    if args.emit:
        serializers.write_csv(
            args.emit,
            serializers.CALIBRATION_COLUMNS,
            serializers.build_calibration_rows(ingest_calibration(args.path)),
        )
    _print(summary)


def run_simulation(args: argparse.Namespace) -> None:
    config = build_config(args)
    paths.set_output_dir(config.output_dir)
    controller = ExperimentController(config)
    verb = {
        "sweep": controller.sweep,
        "pseudothreshold": controller.pseudothreshold,
        "ensemble": controller.ensemble,
        "optimize-layout": controller.optimize_layout,
    }[args.verb]
    summary = verb()
    logging.info("Done: %s (fingerprint %s)", args.verb, summary["fingerprint"])
    _print({k: v for k, v in summary.items() if k != "config"})


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _add_simulation_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="Config JSON or a previous summary JSON")
    p.add_argument("--seed", type=int, help="Master seed (required)")
    p.add_argument("-d", "--distance", type=int, nargs="+", help="Code distance(s)")
    p.add_argument("--decoder", nargs="+", choices=DECODER_MODES)
    p.add_argument("--noise", choices=NOISE_MODELS)
    p.add_argument("--arrangement", choices=ARRANGEMENTS)
    p.add_argument("--arrangement-seed", type=int)
    p.add_argument("--layout", help="Layout CSV for --arrangement imported")
    p.add_argument("--rank-key", choices=RANK_KEYS)
    p.add_argument("--t-ref", type=float, help="Reference time (us) for p_fail")
    p.add_argument("--selection", choices=(SELECT_BEST, SELECT_RANDOM))
    p.add_argument("--n-arrangements", type=int)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--p-grid", type=float, nargs="+")
    grid.add_argument("--t-grid", type=float, nargs="+")
    p.add_argument("--trials", type=int, help="Trials per point (default 10000)")
    p.add_argument("--adaptive", action="store_const", const=True)
    p.add_argument("--max-trials", type=int)
    p.add_argument("--calibration", help="CSV with qubit_id,t1_us,t2_us")
    p.add_argument("--symmetric-t", type=float, help="T1 = T2 (us) without a table")
    p.add_argument("--iid-reference", action="store_const", const=True)
    p.add_argument("--breakdown", action="store_const", const=True)
    p.add_argument("--plot", action="store_const", const=True)
    p.add_argument("--workers", type=int, help="Worker threads")
    p.add_argument(
        "--output-dir",
        default=None,
        help=f"Result directory (default: ${paths.ENV_VAR} or CWD)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planar-inid",
        description="Planar surface code simulations under non-uniform qubit noise",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--log-level",
        default=os.environ.get("PLANAR_LOG_LEVEL", "info"),
        help="Logging level (env PLANAR_LOG_LEVEL, default info)",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    ingest = sub.add_parser("ingest", help="Validate and summarize a calibration table")
    ingest.add_argument("path")
    ingest.add_argument("--emit", help="Re-emit the parsed table to this CSV path")
    ingest.set_defaults(func=run_ingest)

    helps = {
        "sweep": "Logical error rate curve(s)",
        "pseudothreshold": "Sweep and locate where P_L = p",
        "ensemble": "Pseudo-threshold statistics over random arrangements",
        "optimize-layout": "Emit the optimized placement table",
    }
    for verb in SIMULATION_VERBS:
        p = sub.add_parser(verb, help=helps[verb])
        _add_simulation_flags(p)
        p.set_defaults(func=run_simulation)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.getLogger().setLevel(args.log_level.upper())
    return _wrap(args.func, args)


if __name__ == "__main__":
    sys.exit(main())
