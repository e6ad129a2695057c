"""Shared orchestration for the simulation verbs.

The argparse entry point builds one :class:`ExperimentController` per run and
calls the verb method; every verb writes its tables and a summary JSON and
returns that summary.
"""

import logging
import os
from dataclasses import replace

from cli import __version__, paths, serializers
from cli.calibration import ingest_calibration, summarize_calibration, uniform_specs
from cli.constants import (
    ARRANGE_IMPORTED,
    ARRANGE_OPTIMIZED,
    ARRANGE_RANDOM,
    DECODER_MWPM,
    NOISE_IID,
    NOISE_INID,
)
from cli.conversions import coefficient_of_variation
from cli.lattice import PlanarLattice, build_lattice
from cli.layout import (
    Arrangement,
    arrangement_from_table,
    as_indexed_arrangement,
    optimize_layout,
    random_arrangement,
    read_layout_table,
)
from cli.montecarlo import (
    NotBracketedError,
    SweepConfig,
    SweepResult,
    arrangement_ensemble_stats,
    estimate_pseudothreshold,
    sweep,
    sweep_times,
)
from cli.noise import QubitSpec
from cli.schemas import ExperimentConfig

__all__ = ["ExperimentController", "ingest_summary"]


def ingest_summary(path: str) -> dict:
    """Validate a calibration table and summarize it."""
    specs = ingest_calibration(path)
    summary = summarize_calibration(specs)
    summary["path"] = os.path.basename(path)
    return summary


class ExperimentController:
    """Runs the simulation verbs for one experiment configuration."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.fingerprint = config.fingerprint()
        self._pool: list[QubitSpec] | None = None

    # -- Private helpers -----------------------------------------------------

    def _specs(self, lattice: PlanarLattice) -> list[QubitSpec]:
        """The processor's qubits, or uniform symmetric qubits without one."""
        if self.config.calibration is None:
            return uniform_specs(lattice.n_qubits, self.config.symmetric_t_us)
        if self._pool is None:
            self._pool = ingest_calibration(self.config.calibration)
        return self._pool

    def _arrangement(
        self, lattice: PlanarLattice, specs: list[QubitSpec], strategy: str
    ) -> Arrangement:
        cfg = self.config
        if strategy == ARRANGE_OPTIMIZED:
            return optimize_layout(
                lattice, specs, cfg.rank_key, cfg.t_ref_us, cfg.selection, cfg.seed
            )
        if strategy == ARRANGE_RANDOM:
            seed = cfg.seed if cfg.arrangement_seed is None else cfg.arrangement_seed
            return random_arrangement(lattice, specs, seed)
        if strategy == ARRANGE_IMPORTED:
            rows = read_layout_table(cfg.layout_path(lattice.distance))
            return arrangement_from_table(lattice, rows, specs)
        return as_indexed_arrangement(lattice, specs)

    def _sweep_config(
        self, lattice: PlanarLattice, arrangement: Arrangement, decoder: str, noise: str
    ) -> SweepConfig:
        cfg = self.config
        return SweepConfig(
            lattice=lattice,
            arrangement=arrangement,
            noise_model=noise,
            decoder_mode=decoder,
            seed=cfg.seed,
            n_trials=cfg.n_trials,
            workers=cfg.workers,
            adaptive=cfg.adaptive,
            max_trials=cfg.max_trials,
        )

    def _curve(self, sweep_config: SweepConfig) -> SweepResult:
        logging.info(
            "Sweeping d=%d %s %s (%s)",
            sweep_config.lattice.distance,
            sweep_config.decoder_mode,
            sweep_config.noise_model,
            sweep_config.arrangement.strategy,
        )
        if self.config.uses_time_grid:
            return sweep_times(sweep_config, self.config.grid())
        return sweep(sweep_config, self.config.grid())

    def _write_points(self, result: SweepResult, tag: str = "") -> str:
        path = paths.points_csv(result.distance, result.decoder_mode, tag)
        rows = [
            serializers.build_point_row(pt, self.config.breakdown)
            for pt in result.points
        ]
        serializers.write_csv(
            path,
            serializers.point_columns(self.config.breakdown),
            rows,
            serializers.provenance_line(self.fingerprint, self.config.seed),
        )
        return os.path.basename(path)

    @staticmethod
    def _threshold(result: SweepResult) -> tuple[float | None, str | None]:
        try:
            return estimate_pseudothreshold(result), None
        except NotBracketedError as e:
            return None, str(e)

    def _curves(self) -> list[tuple[SweepResult, str]]:
        """Every configured curve plus optional iid references, as
        (result, tag). Reference curves are tagged ``iid``."""
        cfg = self.config
        out: list[tuple[SweepResult, str]] = []
        for d in cfg.distances:
            lattice = build_lattice(d)
            specs = self._specs(lattice)
            arrangement = self._arrangement(lattice, specs, cfg.arrangement)
            for decoder in cfg.decoders:
                sc = self._sweep_config(lattice, arrangement, decoder, cfg.noise_model)
                out.append((self._curve(sc), ""))
            if cfg.iid_reference and cfg.noise_model == NOISE_INID:
                sc = self._sweep_config(lattice, arrangement, DECODER_MWPM, NOISE_IID)
                out.append((self._curve(sc), NOISE_IID))
        return out

    def _summary(self, verb: str, body: dict) -> dict:
        summary = {
            "verb": verb,
            "version": __version__,
            "fingerprint": self.fingerprint,
            "seed": self.config.seed,
            "config": self.config.echo(),
        }
        summary.update(body)
        serializers.write_json(paths.summary_json(verb), summary)
        return summary

    def _plot(self, verb: str, curves: list[SweepResult]) -> str | None:
        if not self.config.plot:
            return None
        from cli.plotting import plot_curves

        written = plot_curves(
            paths.plot_svg(verb), curves, self.fingerprint, self.config.seed, verb
        )
        return os.path.basename(written) if written else None

    # -- Verbs ---------------------------------------------------------------

    def sweep(self) -> dict:
        entries = []
        curves = self._curves()
        for result, tag in curves:
            entry = serializers.build_curve(result, breakdown=self.config.breakdown)
            entry["file"] = self._write_points(result, tag)
            entries.append(entry)
        body = {"curves": entries, "plot": self._plot("sweep", [c for c, _ in curves])}
        return self._summary("sweep", body)

    def pseudothreshold(self) -> dict:
        entries = []
        table: dict[int, dict[str, float | None]] = {}
        reference: dict[int, float | None] = {}
        curves = self._curves()
        for result, tag in curves:
            p_pth, error = self._threshold(result)
            entry = serializers.build_curve(
                result, p_pth, error, breakdown=self.config.breakdown
            )
            entry["file"] = self._write_points(result, tag)
            entries.append(entry)
            if tag == NOISE_IID:
                reference[result.distance] = p_pth
            else:
                table.setdefault(result.distance, {})[result.decoder_mode] = p_pth

        body = {
            "curves": entries,
            "pseudothresholds": {str(d): v for d, v in table.items()},
            "ratios": {
                str(d): _ratios(v, next(iter(v.values()))) for d, v in table.items()
            },
            "plot": self._plot("pseudothreshold", [c for c, _ in curves]),
        }
        if reference:
            body["iid_reference"] = {str(d): v for d, v in reference.items()}
            body["ratios_vs_iid"] = {
                str(d): _ratios(table[d], reference[d]) for d in reference
            }
        return self._summary("pseudothreshold", body)

    def ensemble(self) -> dict:
        cfg = self.config
        if cfg.uses_time_grid:
            raise ValueError("the ensemble study needs a p grid, not a t grid")
        grid = cfg.grid()
        per_distance = {}
        for d in cfg.distances:
            lattice = build_lattice(d)
            specs = self._specs(lattice)
            base = as_indexed_arrangement(lattice, specs)
            entry: dict = {
                "cv_t1": coefficient_of_variation([s.t1 for s in specs]),
                "cv_t2": coefficient_of_variation([s.t2 for s in specs]),
                "decoders": {},
            }
            compare = None
            if cfg.arrangement != ARRANGE_RANDOM:
                compare = self._arrangement(lattice, specs, cfg.arrangement)
            for decoder in cfg.decoders:
                sc = self._sweep_config(lattice, base, decoder, cfg.noise_model)
                stats = arrangement_ensemble_stats(
                    sc, specs, grid, cfg.n_arrangements, cfg.seed, workers=cfg.workers
                )
                result = serializers.build_ensemble(stats)
                if compare is not None:
                    curve = sweep(replace(sc, arrangement=compare), grid)
                    p_pth, error = self._threshold(curve)
                    result["comparison"] = {
                        "arrangement": compare.strategy,
                        "pseudothreshold": p_pth,
                        "pseudothreshold_error": error,
                    }
                entry["decoders"][decoder] = result
            if cfg.iid_reference:
                sc = self._sweep_config(lattice, base, DECODER_MWPM, NOISE_IID)
                p_pth, error = self._threshold(sweep(sc, grid))
                entry["iid_reference"] = p_pth
                if error:
                    entry["iid_reference_error"] = error
            per_distance[str(d)] = entry
        return self._summary("ensemble", {"ensembles": per_distance})

    def optimize_layout(self) -> dict:
        placements = {}
        for d in self.config.distances:
            lattice = build_lattice(d)
            specs = self._specs(lattice)
            arrangement = self._arrangement(lattice, specs, ARRANGE_OPTIMIZED)
            path = paths.layout_csv(d)
            serializers.write_csv(
                path,
                serializers.LAYOUT_COLUMNS,
                serializers.build_layout_rows(arrangement),
                serializers.provenance_line(self.fingerprint, self.config.seed),
            )
            placements[str(d)] = {
                "file": os.path.basename(path),
                "rank_key": arrangement.rank_key,
                "qubit_ids": arrangement.qubit_ids(),
            }
        return self._summary("optimize-layout", {"layouts": placements})


def _ratios(values: dict[str, float | None], base: float | None) -> dict:
    if not base:
        return {k: None for k in values}
    return {k: (v / base if v is not None else None) for k, v in values.items()}
