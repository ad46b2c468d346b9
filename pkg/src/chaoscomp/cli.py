import json
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, Dict, Iterator, List, Optional, Sequence, Tuple

import click
import typer
from rich.panel import Panel
from rich.text import Text
from ruamel.yaml import YAMLError

from chaoscomp.__version__ import __description__, __title__, __version__
from chaoscomp.core.boundary import write_boundary
from chaoscomp.core.coder import shannon_optimality_trial
from chaoscomp.core.config import config_manager
from chaoscomp.core.datasets import generate_synthetic, write_csv
from chaoscomp.core.initializer import initialize
from chaoscomp.core.logger import logger
from chaoscomp.core.orchestrator import Orchestrator
from chaoscomp.schemas.config import RunConfig, SyntheticSpec
from chaoscomp.schemas.model import Metrics

app = typer.Typer(
    name="chaoscomp",
    help="ChaosComp: classify by the shortest chaotic-map encoding.",
    add_completion=False,
    no_args_is_help=True,
)

# Options shared by the commands that read a dataset
DataOpt = Annotated[Optional[Path], typer.Option("--data", help="Input CSV file (header row, numeric features).")]
DatasetOpt = Annotated[Optional[str], typer.Option("--dataset", help="Named dataset: iris, breast_cancer, wine, seeds, banknote or ionosphere.")]
KindOpt = Annotated[
    Optional[str],
    typer.Option("--kind", help="Generated dataset: circles, moons, linear, xor, nand or nor."),
]
SamplesOpt = Annotated[int, typer.Option("--samples", min=1, help="Samples per class for generated data.")]
NoiseOpt = Annotated[
    float,
    typer.Option("--noise", min=0.0, help="Noise of generated data (blob spread is 10x this for linear)."),
]
LabelColOpt = Annotated[Optional[str], typer.Option("--label-col", help="Label column name (default: last column).")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Seed for every random choice.")]
TestFractionOpt = Annotated[
    Optional[float],
    typer.Option(
        "--test-fraction",
        click_type=click.FloatRange(0.0, 1.0, max_open=True),
        help="Held-out fraction; 0 trains on every row.",
    ),
]
CapOpt = Annotated[Optional[int], typer.Option("--cap-per-class", min=1, help="Keep at most this many training rows per class.")]
AugmentOpt = Annotated[
    Optional[bool],
    typer.Option("--augment/--no-augment", help="Append the sum-of-squares feature (fewer than 30 features only)."),
]
PadOpt = Annotated[Optional[int], typer.Option("--pad-symbol", min=0, max=1, help="Symbol used to pad the last word.")]
AlphaOpt = Annotated[Optional[float], typer.Option("--alpha", click_type=click.FloatRange(0.0, min_open=True), help="Laplace smoothing constant.")]
ModelOpt = Annotated[Optional[Path], typer.Option("--model", help="Model document path (default: model_out from the configuration).")]
OutOpt = Annotated[Optional[Path], typer.Option("--out", help="Write the JSON document here instead of stdout.")]
ConfigOpt = Annotated[Optional[Path], typer.Option("--config", help="Configuration file (default: nearest chaoscomp.yaml).")]


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    debug: bool = typer.Option(False, "--debug", help="Enable debug mode for more verbose output.", is_flag=True),
    version: bool = typer.Option(False, "--version", "-v", help="Show the version of ChaosComp."),
):
    """
    ChaosComp CLI.
    """
    ctx.meta["debug"] = debug
    logger.setLevel("DEBUG" if debug else "INFO")
    if debug:
        logger.debug("Debug mode enabled")

    if version:
        _show_version()
        raise typer.Exit()

    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit()


@app.command()
def init(
    directory: str = typer.Option(".", "--directory", "-d", help="Directory to initialize the ChaosComp workspace."),
):
    """
    Create chaoscomp.yaml and the data/, models/ and reports/ directories.
    """
    initialize(directory=directory)


@app.command()
def train(
    data: DataOpt = None,
    dataset: DatasetOpt = None,
    kind: KindOpt = None,
    samples: SamplesOpt = 250,
    noise: NoiseOpt = 0.1,
    label_col: LabelColOpt = None,
    test_fraction: TestFractionOpt = None,
    seed: SeedOpt = None,
    n: Annotated[Optional[int], typer.Option("--n", min=1, help="Word length of the return map.")] = None,
    threshold: Annotated[
        Optional[float],
        typer.Option("--threshold", click_type=click.FloatRange(0.0, 1.0, min_open=True), help="Binarization threshold."),
    ] = None,
    alpha: AlphaOpt = None,
    pad_symbol: PadOpt = None,
    cap_per_class: CapOpt = None,
    augment: AugmentOpt = None,
    model: ModelOpt = None,
    out: OutOpt = None,
    config: ConfigOpt = None,
):
    """
    Fit one classifier, save it and print its training and test metrics.
    """
    with _handle_errors("train"):
        overrides = _source_overrides(data, dataset, kind, samples, noise, seed)
        overrides.update(
            label_col=label_col,
            test_fraction=test_fraction,
            seed=seed,
            n=n,
            threshold=threshold,
            alpha=alpha,
            pad_symbol=pad_symbol,
            cap_per_class=cap_per_class,
            augment=augment,
            model_out=_absolute(model),
        )
        orchestrator = _orchestrator(config, overrides)
        _, report = orchestrator.train()

        _show_metrics("Training rows", report.train)
        if report.test is not None:
            _show_metrics("Held-out rows", report.test)
        _emit_json(report.model_dump(mode="json"), _metrics_target(orchestrator, out))


@app.command()
def tune(
    data: DataOpt = None,
    dataset: DatasetOpt = None,
    kind: KindOpt = None,
    samples: SamplesOpt = 250,
    noise: NoiseOpt = 0.1,
    label_col: LabelColOpt = None,
    test_fraction: TestFractionOpt = None,
    seed: SeedOpt = None,
    alpha: AlphaOpt = None,
    pad_symbol: PadOpt = None,
    cap_per_class: CapOpt = None,
    augment: AugmentOpt = None,
    grid_n: Annotated[
        Optional[List[int]], typer.Option("--grid-n", help="Word length to search (repeatable).")
    ] = None,
    grid_threshold: Annotated[
        Optional[List[float]], typer.Option("--grid-threshold", help="Threshold to search (repeatable).")
    ] = None,
    folds: Annotated[Optional[int], typer.Option("--folds", min=2, help="Cross-validation folds.")] = None,
    jobs: Annotated[Optional[int], typer.Option("--jobs", min=1, help="Parallel workers; results do not depend on it.")] = None,
    cv_table: Annotated[Optional[Path], typer.Option("--cv-table", help="Where to write the cross-validation CSV.")] = None,
    model: ModelOpt = None,
    out: OutOpt = None,
    config: ConfigOpt = None,
):
    """
    Grid-search (threshold, n) by stratified cross-validation and save the best model.
    """
    with _handle_errors("tune"):
        overrides = _source_overrides(data, dataset, kind, samples, noise, seed)
        overrides.update(
            label_col=label_col,
            test_fraction=test_fraction,
            seed=seed,
            pad_symbol=pad_symbol,
            cap_per_class=cap_per_class,
            augment=augment,
            jobs=jobs,
            model_out=_absolute(model),
            cv_table_out=_absolute(cv_table),
        )
        grid = _grid_overrides(config, grid_n, grid_threshold, folds, alpha)
        if grid:
            overrides["grid"] = grid
        orchestrator = _orchestrator(config, overrides)
        _, report = orchestrator.tune()

        _show_metrics("Training rows", report.train)
        if report.test is not None:
            _show_metrics("Held-out rows", report.test)
        _emit_json(report.model_dump(mode="json"), _metrics_target(orchestrator, out))


@app.command()
def evaluate(
    data: DataOpt = None,
    dataset: DatasetOpt = None,
    kind: KindOpt = None,
    samples: SamplesOpt = 250,
    noise: NoiseOpt = 0.1,
    label_col: LabelColOpt = None,
    seed: SeedOpt = None,
    model: ModelOpt = None,
    out: OutOpt = None,
    config: ConfigOpt = None,
):
    """
    Score a saved model on every row of a dataset and print the metrics as JSON.
    """
    with _handle_errors("evaluate"):
        overrides = _source_overrides(data, dataset, kind, samples, noise, seed)
        overrides.update(label_col=label_col, seed=seed)
        orchestrator = _orchestrator(config, overrides)
        metrics = orchestrator.evaluate(_model_path(orchestrator, model))

        _show_metrics("Evaluation", metrics)
        _emit_json(metrics.model_dump(mode="json"), _metrics_target(orchestrator, out))


@app.command()
def predict(
    data: DataOpt = None,
    dataset: DatasetOpt = None,
    kind: KindOpt = None,
    samples: SamplesOpt = 250,
    noise: NoiseOpt = 0.1,
    label_col: LabelColOpt = None,
    seed: SeedOpt = None,
    model: ModelOpt = None,
    out: OutOpt = None,
    config: ConfigOpt = None,
):
    """
    Per-row predicted class and code length under every class map.
    """
    with _handle_errors("predict"):
        overrides = _source_overrides(data, dataset, kind, samples, noise, seed)
        overrides.update(label_col=label_col, seed=seed)
        orchestrator = _orchestrator(config, overrides)
        trained, predictions = orchestrator.predict(_model_path(orchestrator, model))

        rows = [
            {
                "row": index,
                "label": p.label,
                "class": trained.class_names[p.label],
                "bits": list(p.per_class_bits),
                "exact_bits": list(p.per_class_exact_bits),
                "tie_broken": p.tie_broken,
            }
            for index, p in enumerate(predictions)
        ]
        logger.success(f"Predicted {len(rows)} rows")
        _emit_json(rows, out)


@app.command()
def synth(
    kind: Annotated[str, typer.Option("--kind", help="circles, moons, linear, xor, nand or nor.")] = "xor",
    samples: SamplesOpt = 250,
    noise: NoiseOpt = 0.1,
    seed: Annotated[int, typer.Option("--seed", help="Generator seed.")] = 90,
    out: Annotated[Optional[Path], typer.Option("--out", help="CSV path (default: data/<kind>.csv).")] = None,
):
    """
    Write a generated dataset as CSV. Logic gates always have four rows.
    """
    with _handle_errors("synth"):
        ds = generate_synthetic(SyntheticSpec(kind=kind, samples=samples, noise=noise, seed=seed))
        path = write_csv(ds, out if out is not None else Path("data") / f"{kind}.csv")
        logger.success(f"Wrote {ds.n_rows} rows to {path}")


@app.command()
def boundary(
    model: ModelOpt = None,
    bounds: Annotated[
        Tuple[float, float, float, float],
        typer.Option("--bounds", help="xmin xmax ymin ymax of the lattice."),
    ] = (0.0, 1.0, 0.0, 1.0),
    resolution: Annotated[int, typer.Option("--resolution", min=1, help="Points per axis.")] = 100,
    out: Annotated[
        Optional[Path], typer.Option("--out", help="CSV path (default: reports/boundary.csv).")
    ] = None,
    config: ConfigOpt = None,
):
    """
    Classify a regular lattice with a two-feature model and write it as CSV.
    """
    with _handle_errors("boundary"):
        orchestrator = _orchestrator(config, {})
        trained, rows = orchestrator.boundary(_model_path(orchestrator, model), bounds, resolution)
        target = _absolute(out) or str(orchestrator.resolve("reports/boundary.csv"))
        path = write_boundary(rows, target, trained.class_names)
        logger.success(f"Wrote {len(rows)} lattice points to {path}")


@app.command()
def entropy(
    model: ModelOpt = None,
    out: OutOpt = None,
    config: ConfigOpt = None,
):
    """
    Per-class entropy rate and Lyapunov exponent of a saved model.
    """
    with _handle_errors("entropy"):
        orchestrator = _orchestrator(config, {})
        rows = orchestrator.entropy(_model_path(orchestrator, model))
        columns = list(rows[0])
        logger.print_table("Class maps", columns, [[row[c] for c in columns] for row in rows])
        _emit_json(rows, out)


@app.command()
def shannon(
    p0: Annotated[
        float,
        typer.Option(
            "--p0",
            click_type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
            help="Probability of symbol 0.",
        ),
    ] = 0.2,
    length: Annotated[int, typer.Option("--length", min=100, help="Symbols per sequence.")] = 10_000,
    trials: Annotated[int, typer.Option("--trials", min=1, help="Independent sequences.")] = 50,
    seed: Annotated[int, typer.Option("--seed", help="Generator seed.")] = 90,
    out: OutOpt = None,
):
    """
    Code i.i.d. binary sequences with the matched Baker's map and compare with the entropy.
    """
    with _handle_errors("shannon"):
        summary = shannon_optimality_trial(p0, length, trials, seed)
        logger.print_table(
            "Shannon optimality",
            ["p0", "N", "trials", "H (bits)", "mean bits/symbol", "std error", "max excess"],
            [[summary.p0, summary.length, summary.trials, summary.entropy,
              summary.mean_bits_per_symbol, summary.std_error, summary.max_excess_over_empirical]],
        )
        _emit_json(summary.model_dump(mode="json"), out)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and return its exit code instead of exiting.

    0 on success, 1 on a reported error, 2 on a usage error.
    """
    command = typer.main.get_command(app)
    try:
        result = command.main(args=list(argv) if argv is not None else None, prog_name="chaoscomp", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        logger.error("Aborted")
        return 1
    return result if isinstance(result, int) else 0


# Helpers


@contextmanager
def _handle_errors(command: str) -> Iterator[None]:
    try:
        yield
    except (ValueError, OSError, YAMLError) as e:
        logger.error(f"{command} failed: {e}")
        raise typer.Exit(code=1)


def _absolute(path: Optional[Path]) -> Optional[str]:
    # Command-line paths are relative to the working directory, not the project root
    return str(path.resolve()) if path is not None else None


def _source_overrides(
    data: Optional[Path],
    dataset: Optional[str],
    kind: Optional[str],
    samples: int,
    noise: float,
    seed: Optional[int],
) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {"data": _absolute(data), "dataset": dataset}
    if kind is not None:
        synthetic: Dict[str, Any] = {"kind": kind, "samples": samples, "noise": noise}
        if seed is not None:
            synthetic["seed"] = seed
        overrides["synthetic"] = synthetic
    return overrides


def _grid_overrides(
    config: Optional[Path],
    grid_n: Optional[List[int]],
    grid_threshold: Optional[List[float]],
    folds: Optional[int],
    alpha: Optional[float],
) -> Dict[str, Any]:
    flags = {"n_values": grid_n or None, "thresholds": grid_threshold or None, "folds": folds, "alpha": alpha}
    flags = {key: value for key, value in flags.items() if value is not None}
    if not flags:
        return {}
    # Merge into the file's grid so unset keys keep their configured values
    config_path = config if config is not None else config_manager.find_config_file()
    document = config_manager.read_document(config_path) if config_path is not None else {}
    return {**dict(document.get("grid") or {}), **flags}


def _orchestrator(config: Optional[Path], overrides: Dict[str, Any]) -> Orchestrator:
    config_path = config if config is not None else config_manager.find_config_file()
    if config_path is not None:
        logger.info(f"Using configuration file: {config_path}")
    run_config: RunConfig = config_manager.load_config(config_path, overrides)
    project_root = Path(config_path).resolve().parent if config_path is not None else Path.cwd()
    logger.debug(f"Project root identified as: {project_root}")
    return Orchestrator(run_config, project_root=project_root)


def _model_path(orchestrator: Orchestrator, model: Optional[Path]) -> str:
    return _absolute(model) or orchestrator.config.model_out


def _metrics_target(orchestrator: Orchestrator, out: Optional[Path]) -> Optional[Path]:
    if out is not None:
        return out
    configured = orchestrator.config.metrics_out
    return orchestrator.resolve(configured) if configured else None


def _show_metrics(title: str, metrics: Metrics) -> None:
    logger.print_table(
        title,
        ["accuracy", "macro precision", "macro recall", "macro F1"],
        [[metrics.accuracy, metrics.macro_precision, metrics.macro_recall, metrics.macro_f1]],
    )


def _emit_json(document: Any, out: Optional[Path]) -> None:
    text = json.dumps(document, indent=2, sort_keys=True)
    if out is None:
        typer.echo(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    logger.success(f"Wrote {out}")


def _show_version():
    """Show the version information of ChaosComp"""
    version_text = Text()
    version_text.append("ChaosComp ", style="bold blue")
    version_text.append(f"v{__version__}", style="bold green")

    info_panel = Panel(
        version_text,
        title=f"[bold]{__title__}[/bold]",
        subtitle=f"[dim]{__description__}[/dim]",
        border_style="blue",
        padding=(1, 2)
    )

    logger.print(info_panel)
