"""Operator surface: extract -> restructure -> mix -> evaluate.

Exit codes: 0 success, 1 data error (single-line `<class>: <message>` on
stderr), 2 usage error. All randomness flows from --seed (or the
SIGNALMINE_SEED environment variable / config file default).
"""

from __future__ import annotations

import json
import os
import sys
from importlib import resources
from pathlib import Path

import click

from . import __version__
from .dataset_io import IntegrityError, stats_report, verify_bundle, write_bundle
from .eval_harness.datasets import METRICS, eval_dataset
from .eval_harness.gaokao import grade_gaokao, load_paper
from .eval_harness.scorers import ExternalCommandScorer, ReferenceScorer, ScorerError
from .extractors import MINES, extract_documents, read_jsonl
from .extractors.pwc import EntityDb
from .mixer import mix
from .normalizer import DetectorError
from .report import ExtractionReport
from .restructurer.pools import DistractorPools
from .restructurer.render import ConfigError, RenderError, render_with_selected
from .restructurer.templates import audit, load_registry
from .signal_model import (
    SchemaError,
    dump_tuples,
    example_to_record,
    load_mixspec,
    load_tuples,
    mixspec_from_record,
)

SEED_ENV = "SIGNALMINE_SEED"

_DATA_ERRORS = (SchemaError, IntegrityError, RenderError, ConfigError, ScorerError, DetectorError, OSError)
_ERROR_CLASSES = {
    SchemaError: "schema-error",
    IntegrityError: "integrity-error",
    RenderError: "render-error",
    ConfigError: "config-error",
    ScorerError: "scorer-error",
    DetectorError: "detector-error",
    OSError: "io-error",
}


def _fail(exc: Exception) -> None:
    for cls, label in _ERROR_CLASSES.items():
        if isinstance(exc, cls):
            click.echo(f"{label}: {exc}", err=True)
            sys.exit(1)
    raise exc


def _default_seed(ctx: click.Context) -> int:
    config = ctx.obj.get("config", {}) if ctx.obj else {}
    if SEED_ENV in os.environ:
        try:
            return int(os.environ[SEED_ENV])
        except ValueError as exc:
            raise click.UsageError(f"{SEED_ENV} must be an unsigned integer") from exc
    return int(config.get("seed", 0))


def _seed_option():
    return click.option("--seed", type=click.IntRange(min=0), default=None,
                        help=f"Random seed (default: ${SEED_ENV} or config or 0).")


@click.group()
@click.version_option(__version__)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON file supplying option defaults.")
@click.option("--threads", type=click.IntRange(min=1), default=1,
              help="Upper bound on worker threads.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None, threads: int) -> None:
    """Mine signal tuples, render prompted examples, mix datasets, evaluate."""
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads
    ctx.obj["config"] = {}
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                ctx.obj["config"] = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"bad config file: {exc}") from exc


@main.command()
@click.option("--mine", "mine", required=True, help=f"One of: {', '.join(MINES)}.")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@_seed_option()
@click.option("--db", "db_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Typed term database (paperswithcode mine).")
@click.option("--blocklist", "blocklist_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Extra property names to discard, one per line (wikidata mine).")
@click.option("--cloze-rate", type=float, default=0.15, show_default=True,
              help="Masked word fraction (plain_text mine).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None,
              help="Extraction report path (default: <out>.report.json).")
@click.option("--language-gate/--no-language-gate", default=True, show_default=True)
@click.pass_context
def extract(ctx, mine, in_path, out_path, seed, db_path, blocklist_path, cloze_rate,
            report_path, language_gate):
    """Convert one mine's raw dump into validated signal tuples."""
    if mine not in MINES:
        raise click.UsageError(f"unknown mine: {mine}")
    seed = _default_seed(ctx) if seed is None else seed
    options: dict = {"cloze_rate": cloze_rate}
    try:
        if mine == "paperswithcode":
            if not db_path:
                raise click.UsageError("--db is required for the paperswithcode mine")
            options["entity_db"] = EntityDb(read_jsonl(db_path))
        if blocklist_path:
            lines = Path(blocklist_path).read_text(encoding="utf-8").splitlines()
            options["property_blocklist"] = tuple(l.strip() for l in lines if l.strip())
        report = ExtractionReport()
        tuples = extract_documents(
            mine, read_jsonl(in_path), seed=seed, report=report, language_gate=language_gate,
            options=options,
        )
        Path(out_path).write_text(dump_tuples(tuples), encoding="utf-8")
        report_file = Path(report_path) if report_path else Path(f"{out_path}.report.json")
        report_file.write_text(report.to_json() + "\n", encoding="utf-8")
        click.echo(f"extracted {len(tuples)} tuples from {report.docs_processed} documents")
    except click.UsageError:
        raise
    except _DATA_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--tuples", "tuples_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--templates", "templates_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Template catalog (defaults to the bundled one).")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--family", type=click.Choice(["multiple_choice", "generation", "auto"]),
              default="auto", show_default=True)
@_seed_option()
@click.pass_context
def restructure(ctx, tuples_path, templates_path, out_path, family, seed):
    """Render each tuple into one prompted source/target example."""
    seed = _default_seed(ctx) if seed is None else seed
    try:
        registry = load_registry(templates_path)
        tuples = load_tuples(Path(tuples_path).read_text(encoding="utf-8"))
        pools = DistractorPools.build(tuples)
        lines = []
        for tup in tuples:
            if family == "auto":
                fam = "cloze" if tup.signal_type == "plain_text_cloze" else None
                if fam is None:
                    for candidate in ("multiple_choice", "generation"):
                        if registry.get(tup.signal_type, candidate):
                            fam = candidate
                            break
                if fam is None:
                    raise ConfigError(f"no templates at all for {tup.signal_type}")
            else:
                fam = family
            ex = render_with_selected(registry, tup, fam, pools, seed)
            lines.append(json.dumps(example_to_record(ex), ensure_ascii=False, sort_keys=True))
        Path(out_path).write_text("".join(l + "\n" for l in lines), encoding="utf-8")
        click.echo(f"rendered {len(lines)} examples")
    except _DATA_ERRORS as exc:
        _fail(exc)


def _load_spec(spec_arg: str):
    path = Path(spec_arg)
    if path.exists():
        return load_mixspec(path.read_text(encoding="utf-8"))
    preset = resources.files("signalmine").joinpath("presets", f"{spec_arg}.json")
    if preset.is_file():
        return mixspec_from_record(json.loads(preset.read_text("utf-8")))
    raise click.UsageError(f"unknown mix spec: {spec_arg}")


@main.command("mix")
@click.option("--spec", "spec_arg", required=True,
              help="MixSpec file path or bundled preset name.")
@click.option("--tuples", "tuples_paths", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(file_okay=False))
@_seed_option()
@click.pass_context
def mix_command(ctx, spec_arg, tuples_paths, out_path, seed):
    """Cap, render, stage, split, and write a dataset bundle."""
    try:
        spec = _load_spec(spec_arg)
        if seed is None and SEED_ENV not in os.environ:
            seed = spec.global_seed
        elif seed is None:
            seed = _default_seed(ctx)
        spec = mixspec_from_record({
            "name": spec.name,
            "split_ratio": spec.split_ratio,
            "global_seed": seed,
            "entries": [
                {
                    "signal_type": e.signal_type, "family": e.family, "weight": e.weight,
                    "cap": e.cap, "per_category_cap": e.per_category_cap, "stage": e.stage,
                    "template_group": e.template_group,
                    "composition": dict(e.composition) if e.composition else None,
                    "composition_key": e.composition_key,
                }
                for e in spec.entries
            ],
        })
        tuples = []
        for p in tuples_paths:
            tuples.extend(load_tuples(Path(p).read_text(encoding="utf-8")))
        registry = load_registry()
        result = mix(tuples, spec, registry)
        streams = {
            f"{spec.name}.stage{stage}.{split}": examples
            for (stage, split), examples in sorted(result.examples.items())
        }
        manifest_extra = {
            "spec_name": spec.name,
            "seed": seed,
            "spec_hash": _spec_hash(spec),
            "warnings": result.warnings,
            "render_errors": result.errors,
        }
        bundle_hash = write_bundle(out_path, streams, manifest_extra)
        click.echo(f"bundle {bundle_hash}")
    except click.UsageError:
        raise
    except _DATA_ERRORS as exc:
        _fail(exc)


def _spec_hash(spec) -> str:
    import hashlib

    blob = json.dumps(
        {
            "name": spec.name,
            "split_ratio": spec.split_ratio,
            "entries": [
                [e.signal_type, e.family, e.weight, e.cap, e.per_category_cap, e.stage,
                 e.template_group, sorted((e.composition or {}).items()), e.composition_key]
                for e in spec.entries
            ],
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@main.command()
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True, file_okay=False))
def stats(bundle_path):
    """Per-signal sample counts recomputed from a bundle's files."""
    try:
        click.echo(stats_report(bundle_path), nl=False)
    except _DATA_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True, file_okay=False))
def validate(bundle_path):
    """Check a bundle's digest and manifest line counts."""
    try:
        manifest = verify_bundle(bundle_path)
        click.echo(f"ok {manifest['bundle_hash']}")
    except _DATA_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--paper", "paper_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--answers", "answers_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--essay-score", type=float, default=None,
              help="External essay score (overrides the answers file).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the per-section breakdown as JSON.")
def grade(paper_path, answers_path, essay_score, out_path):
    """Grade an exam answer file; prints per-section scores and the total."""
    try:
        paper = load_paper(paper_path)
        with open(answers_path, encoding="utf-8") as fh:
            doc = json.load(fh)
        essay = essay_score if essay_score is not None else float(doc.get("essay_score", 0.0))
        sections, total = grade_gaokao(
            paper,
            doc.get("sections", {}),
            section_scores=doc.get("section_scores", {}),
            essay_score=essay,
        )
        for sec in sections:
            click.echo(f"{sec.name}: {sec.score:g} / {sec.max_points:g}")
        click.echo(f"total: {total:g}")
        if out_path:
            report = {
                "paper_id": paper.paper_id,
                "sections": {s.name: {"score": s.score, "max": s.max_points} for s in sections},
                "total": total,
            }
            Path(out_path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                                      encoding="utf-8")
    except (json.JSONDecodeError, ValueError) as exc:
        _fail(SchemaError(str(exc)))
    except _DATA_ERRORS as exc:
        _fail(exc)


@main.command()
@click.option("--dataset", required=True, help="Dataset id (selects the bundled 5-prompt set).")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--prompts", "prompts_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Custom 5-prompt set (JSON list or full prompt document).")
@click.option("--scorer", "scorer_arg", default="reference", show_default=True,
              help="'reference' or 'external-cmd:<command line>'.")
@click.option("--metric", type=click.Choice(METRICS), default=None,
              help="Defaults by dataset family.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@_seed_option()
@click.pass_context
def evaluate(ctx, dataset, data_path, prompts_path, scorer_arg, metric, out_path, seed):
    """Score a dataset with its 5-prompt set; reports avg/max/std."""
    seed = _default_seed(ctx) if seed is None else seed
    if scorer_arg == "reference":
        scorer = ReferenceScorer()
    elif scorer_arg.startswith("external-cmd:"):
        scorer = ExternalCommandScorer(scorer_arg[len("external-cmd:"):].split())
    else:
        raise click.UsageError(f"unknown scorer: {scorer_arg}")
    try:
        from .eval_harness.datasets import load_eval_prompts, prompt_set_for

        prompts_doc = None
        if prompts_path:
            with open(prompts_path, encoding="utf-8") as fh:
                custom = json.load(fh)
            if isinstance(custom, list):
                bundled = load_eval_prompts()
                prompts_doc = {"sets": dict(bundled["sets"], **{dataset: custom}),
                               "datasets": dict(bundled["datasets"], **{dataset: dataset})}
            else:
                prompts_doc = custom
        key, _ = prompt_set_for(dataset, prompts_doc)
        if metric is None:
            metric = {"ner": "micro_f1", "summarization": "rouge1"}.get(key, "accuracy")
        records = list(read_jsonl(data_path))
        report = eval_dataset(dataset, records, scorer, metric, seed=seed, prompts_doc=prompts_doc)
        body = json.dumps(report.to_record(), indent=2, sort_keys=True)
        if out_path:
            Path(out_path).write_text(body + "\n", encoding="utf-8")
        click.echo(body)
    except _DATA_ERRORS as exc:
        _fail(exc)
    finally:
        if isinstance(scorer, ExternalCommandScorer):
            try:
                scorer.close()
            except Exception:
                pass


@main.command("audit-templates")
def audit_templates():
    """Template catalog counts against the frozen registry manifest."""
    try:
        result = audit(load_registry())
        click.echo(json.dumps(result, indent=2, sort_keys=True))
    except _DATA_ERRORS as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
