"""Command-line front end: ``vpm-hilbert <subcommand>``.

Structured results are written to stdout as JSON; summaries and diagnostics
go to stderr through logging. Exit status 0 is success, 1 a domain error (or
a failed verification), 2 an I/O or parse error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Literal, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, model_validator

from vpm_hilbert import __version__
from vpm_hilbert.ballgeo import seb_trace
from vpm_hilbert.config import get_settings, override_settings
from vpm_hilbert.domains import certify, sample_vpm
from vpm_hilbert.exceptions import MatrixFormatError, VPMError
from vpm_hilbert.metrics import airm, birkhoff_pd, hilbert_vpm, hilbert_vpm_eps
from vpm_hilbert.models import Ball, BallPayload, EpsilonDomain, GaussianPayload, SymMat
from vpm_hilbert.profiles import ProfileName
from vpm_hilbert.suites import SUITES, run_profile, run_suite
from vpm_hilbert.symmat import matrix_to_payload, parse_matrix, read_matrix
from vpm_hilbert.transforms import calvo_oller, t1_covariance
from vpm_hilbert.utils import dumps, format_validation_errors
from vpm_hilbert.viz import export_ball_boundary, export_bicone

logger = logging.getLogger(__name__)

Command = Literal["distance", "verify", "seb", "embed", "export", "sample"]
Metric = Literal["hilbert-vpm", "hilbert-vpm-eps", "birkhoff-pd", "airm"]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2

# Input files each subcommand reads.
_REQUIRED_INPUTS: dict[str, int] = {"distance": 2, "seb": 1, "embed": 1}


class RunConfig(BaseModel):
    """Validated command-line invocation."""

    command: Command
    inputs: list[Path] = Field(default_factory=list)
    metric: Metric = "hilbert-vpm"
    eps: float = Field(default=0.0, ge=0)
    iters: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0)
    suite: str = "all"
    n: int = Field(default=3, ge=1)
    trials: Optional[int] = Field(default=None, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)
    profile: Optional[ProfileName] = None
    delta: float = Field(default=0.05, gt=0, lt=0.5)
    what: Literal["bicone", "ball"] = "bicone"
    resolution: int = Field(default=64, ge=1)
    out: Optional[Path] = None
    ball: Optional[Path] = None
    tolerance: Optional[float] = Field(default=None, gt=0)
    verbose: bool = False

    @model_validator(mode="after")
    def validate_command(self) -> "RunConfig":
        """Validate the inputs each subcommand needs."""
        expected = _REQUIRED_INPUTS.get(self.command, 0)
        if len(self.inputs) != expected:
            raise ValueError(f"'{self.command}' takes {expected} input file(s), got {len(self.inputs)}")
        if self.command == "verify" and self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite '{self.suite}', expected 'all' or one of: {', '.join(sorted(SUITES))}")
        if self.command == "export":
            if self.out is None:
                raise ValueError("'export' needs --out")
            if self.what == "bicone" and self.resolution < 8:
                raise ValueError(f"bicone export needs --resolution >= 8, got {self.resolution}")
            if self.what == "ball" and self.ball is None:
                raise ValueError("'export --what ball' needs --ball <seb output>")
        for path in [*self.inputs, *([self.ball] if self.command == "export" and self.ball else [])]:
            if not path.is_file():
                raise ValueError(f"input file does not exist: {path}")
        return self


def _load_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"{path}: not valid JSON ({e})")


def _cmd_distance(config: RunConfig) -> Any:
    a, b = (read_matrix(p) for p in config.inputs)
    if config.metric == "hilbert-vpm":
        report = hilbert_vpm(certify(a), certify(b))
        return {"metric": config.metric, **report.model_dump()}
    if config.metric == "hilbert-vpm-eps":
        value = hilbert_vpm_eps(a, b, EpsilonDomain(epsilon=config.eps))
        return {"metric": config.metric, "eps": config.eps, "value": value}
    if config.metric == "birkhoff-pd":
        return {"metric": config.metric, "value": birkhoff_pd(a, b)}
    return {"metric": config.metric, "value": airm(a, b)}


def _cmd_verify(config: RunConfig) -> Any:
    if config.suite == "all":
        results = run_profile(config.profile, config.n, config.trials, config.seed, config.workers)
    else:
        results = [run_suite(config.suite, config.n, config.trials, config.seed, config.workers)]
    passed = all(r.passed for r in results)
    logger.info("verify: %d/%d suites passed", sum(r.passed for r in results), len(results))
    return {"passed": passed, "seed": config.seed, "suites": [r.model_dump() for r in results]}


def _read_points(path: Path) -> list[SymMat]:
    raw = _load_json(path)
    if not isinstance(raw, list) or not raw:
        raise MatrixFormatError(f"{path}: expected a non-empty JSON array of matrices")
    return [parse_matrix(item, source=f"{path}[{i}]") for i, item in enumerate(raw)]


def _cmd_seb(config: RunConfig) -> Any:
    points = [certify(x) for x in _read_points(config.inputs[0])]
    run = seb_trace(points, config.iters, config.seed)
    logger.info("seb: %d points, %d iterations, radius %.12g", len(points), run.iterations, run.ball.radius)
    return {
        "center": matrix_to_payload(run.ball.center.mat),
        "radius": run.ball.radius,
        "iters": run.iterations,
        "seed": run.seed,
    }


def _cmd_embed(config: RunConfig) -> Any:
    path = config.inputs[0]
    try:
        gaussian = GaussianPayload.model_validate(_load_json(path)).to_params()
    except ValidationError as e:
        raise MatrixFormatError(f"{path}: {format_validation_errors(e)}")
    embedded = calvo_oller(gaussian)
    return {"embedded": matrix_to_payload(embedded), "t1": matrix_to_payload(t1_covariance(embedded).mat)}


def _cmd_export(config: RunConfig) -> Any:
    assert config.out is not None
    if config.what == "bicone":
        report = export_bicone(EpsilonDomain(epsilon=config.eps), config.resolution, config.out)
    else:
        assert config.ball is not None
        try:
            payload = BallPayload.model_validate(_load_json(config.ball))
        except ValidationError as e:
            raise MatrixFormatError(f"{config.ball}: {format_validation_errors(e)}")
        ball = Ball(center=certify(payload.center.to_symmat()), radius=payload.radius)
        report = export_ball_boundary(ball, config.resolution, config.out)
    logger.info("export: wrote %d rows to %s", report.rows, report.path)
    return report.model_dump()


def _cmd_sample(config: RunConfig) -> Any:
    point = sample_vpm(config.n, config.seed, config.delta)
    return matrix_to_payload(point.mat)


COMMANDS: dict[str, Callable[[RunConfig], Any]] = {
    "distance": _cmd_distance,
    "verify": _cmd_verify,
    "seb": _cmd_seb,
    "embed": _cmd_embed,
    "export": _cmd_export,
    "sample": _cmd_sample,
}


def run(config: RunConfig) -> int:
    """Dispatch a validated invocation and write its JSON result to stdout.

    A ``--tolerance`` override applies for this call only.

    Returns:
        The process exit status.
    """
    previous = get_settings()
    if config.tolerance is not None:
        override_settings(**{**previous.model_dump(), "tolerance": config.tolerance})
    try:
        return _dispatch(config)
    finally:
        if config.tolerance is not None:
            override_settings(**previous.model_dump())


def _dispatch(config: RunConfig) -> int:
    try:
        result = COMMANDS[config.command](config)
    except MatrixFormatError as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except VPMError as e:
        logger.error("%s", e)
        return EXIT_DOMAIN
    except (OSError, json.JSONDecodeError) as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except ValidationError as e:
        logger.error("%s", format_validation_errors(e))
        return EXIT_INPUT
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_DOMAIN
    sys.stdout.write(dumps(result) + "\n")
    if config.command == "verify" and not result["passed"]:
        return EXIT_DOMAIN
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for all subcommands."""
    parser = argparse.ArgumentParser(
        prog="vpm-hilbert", description="Hilbert geometry of the variance-precision bicone."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug output to stderr")
    parser.add_argument("--tolerance", type=float, default=None, help="Override the default eigenvalue tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="Distance between two matrices")
    p.add_argument("--metric", default="hilbert-vpm", choices=["hilbert-vpm", "hilbert-vpm-eps", "birkhoff-pd", "airm"])
    p.add_argument("--eps", type=float, default=0.0, help="Enlargement for hilbert-vpm-eps (default: 0)")
    p.add_argument("inputs", nargs=2, type=Path, metavar="MATRIX_JSON")

    p = sub.add_parser("verify", help="Run verification suites")
    p.add_argument("--suite", default="all", help=f"Suite name or 'all' ({', '.join(SUITES)})")
    p.add_argument("--n", type=int, default=3, help="Matrix dimension (default: 3)")
    p.add_argument("--trials", type=int, default=None, help="Trials per suite (default: per-suite)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None, help="Worker threads (default: VPM_WORKERS or 1)")
    p.add_argument("--profile", default=None, choices=["quick", "standard", "full"], help="Suites run by --suite all")

    p = sub.add_parser("seb", help="Approximate smallest enclosing Hilbert ball")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("inputs", nargs=1, type=Path, metavar="POINTS_JSON")

    p = sub.add_parser("embed", help="Calvo-Oller embedding of a Gaussian and its T1 image")
    p.add_argument("inputs", nargs=1, type=Path, metavar="GAUSSIAN_JSON")

    p = sub.add_parser("export", help="Write bicone or ball CSV point clouds")
    p.add_argument("--what", default="bicone", choices=["bicone", "ball"])
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--ball", type=Path, default=None, help="JSON written by 'seb'")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("sample", help="Reproducible random point of VPM(n)")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.05)
    return parser


def _configure_logging(verbose: bool) -> None:
    root = logging.getLogger("vpm_hilbert")
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    for handler in root.handlers:
        if getattr(handler, "_vpm_cli", False):
            # follow sys.stderr if it was swapped since the last call
            handler.setStream(sys.stderr)  # type: ignore[attr-defined]
            return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._vpm_cli = True  # type: ignore[attr-defined]
    root.addHandler(handler)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point for the ``vpm-hilbert`` command."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        config = RunConfig.model_validate({k: v for k, v in vars(args).items() if v is not None})
    except ValidationError as e:
        logger.error("%s", format_validation_errors(e))
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
