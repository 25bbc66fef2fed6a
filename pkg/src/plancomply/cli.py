"""Command-line front end: ingest, score, flow, graph, variants, compare,
intersect, and report pipelines."""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import ingest as ingest_mod
from .classify import ClassifierConfig, classify_trajectory
from .compliance import score_trajectory
from .flow import DEFAULT_MAX_STAGES, build_flow, emit_sankey
from .graphectory import build_graphectory, export_graph, graphectory_stats
from .langutory import PLAN_CATALOGUE, build_langutory, load_plan_spec
from .records import Corpus, TrajectoryRecord
from .stats import (
    group_scores,
    intersection_table,
    mann_whitney_u,
    mcnemar,
)
from .variants import SETTING_CATALOGUE, render_prompt

SCORE_CSV_FIELDS = ("trajectory_id", "instance_id", "setting", "model",
                    "difficulty", "resolved", "ppc", "poc", "ppf", "pc",
                    "langutory", "missing_phases", "extra_phases",
                    "first_occurrence_indices")


def _resolve_plan(plan: str, plan_spec_path: str | None):
    if plan_spec_path:
        return load_plan_spec(plan_spec_path)
    if plan not in PLAN_CATALOGUE:
        raise click.UsageError(
            f"unknown plan {plan!r}; choose from {sorted(PLAN_CATALOGUE)}"
        )
    return PLAN_CATALOGUE[plan]


def _load_classifier(path: str | None) -> ClassifierConfig:
    return ClassifierConfig.from_file(path) if path else ClassifierConfig()


def _load_inputs(inputs: tuple[str, ...], format_tag: str
                 ) -> tuple[list[TrajectoryRecord], list[tuple[str, str]]]:
    """Load each input path independently; collect per-file failures."""
    trajectories: list[TrajectoryRecord] = []
    failures: list[tuple[str, str]] = []
    seen: dict[str, str] = {}
    for path in inputs:
        try:
            corpus = ingest_mod.load_corpus([path], format_tag)
        except Exception as exc:  # noqa: BLE001 - reported per file
            failures.append((path, str(exc)))
            continue
        for traj in corpus:
            if traj.trajectory_id in seen:
                failures.append(
                    (path, f"duplicate trajectory_id {traj.trajectory_id!r} "
                           f"(first seen in {seen[traj.trajectory_id]})"))
                continue
            seen[traj.trajectory_id] = path
            trajectories.append(traj)
    trajectories.sort(key=lambda t: t.trajectory_id)
    return trajectories, failures


def _parallel_map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _write_failures(out: Path, failures: list[tuple[str, str]]) -> None:
    if failures:
        lines = [f"{path}: {reason}" for path, reason in failures]
        (out / "failures.txt").write_text("\n".join(lines) + "\n",
                                          encoding="utf-8")
        click.echo(f"warning: {len(failures)} input(s) failed; "
                   f"see {out / 'failures.txt'}", err=True)


def _score_record(traj: TrajectoryRecord, plan, cfg) -> dict:
    scores = score_trajectory(traj, plan, cfg)
    lang = build_langutory(classify_trajectory(traj, cfg))
    return {
        "trajectory_id": traj.trajectory_id,
        "instance_id": traj.instance_id,
        "setting": traj.plan_setting_name,
        "model": traj.model_name,
        "difficulty": traj.difficulty.value,
        "resolved": traj.resolved,
        "ppc": scores.ppc,
        "poc": scores.poc,
        "ppf": scores.ppf,
        "pc": scores.pc,
        "langutory": lang.compressed,
        "missing_phases": sorted(p.value for p in scores.missing_phases),
        "extra_phases": sorted(p.value for p in scores.extra_phases),
        "first_occurrence_indices": list(scores.first_occurrence_indices),
    }


def read_score_records(path: str | Path) -> list[dict]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            records.append(json.loads(line))
    return records


@click.group()
def main():
    """Plan-compliance analytics for agent trajectories."""


@main.command("ingest")
@click.argument("inputs", nargs=-1, required=True)
@click.option("--format", "format_tag", default="canonical",
              type=click.Choice(["canonical", "swe-agent"]))
@click.option("--out", required=True, type=click.Path())
def cmd_ingest(inputs, format_tag, out):
    """Normalize raw logs into the canonical line-delimited format."""
    trajectories, failures = _load_inputs(inputs, format_tag)
    out_path = Path(out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    corpus = Corpus(trajectories=trajectories)
    out_path.write_text(ingest_mod.serialize_corpus(corpus), encoding="utf-8")
    for path, reason in failures:
        click.echo(f"failed: {path}: {reason}", err=True)
    click.echo(f"ingested {len(trajectories)} trajectories -> {out}")
    if not trajectories and failures:
        sys.exit(1)


@main.command("score")
@click.argument("inputs", nargs=-1)
@click.option("--format", "format_tag", default="canonical",
              type=click.Choice(["canonical", "swe-agent"]))
@click.option("--plan", default="standard")
@click.option("--plan-spec", "plan_spec_path", default=None, type=click.Path())
@click.option("--classifier-config", default=None, type=click.Path())
@click.option("--out", required=True, type=click.Path())
@click.option("--jobs", default=1, type=int)
def cmd_score(inputs, format_tag, plan, plan_spec_path, classifier_config,
              out, jobs):
    """Score a corpus: per-trajectory compliance plus grouped summary."""
    plan_obj = _resolve_plan(plan, plan_spec_path)
    cfg = _load_classifier(classifier_config)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trajectories, failures = _load_inputs(tuple(inputs), format_tag)
    if not trajectories:
        (out_dir / "scores.jsonl").write_text("", encoding="utf-8")
        _write_failures(out_dir, failures)
        if failures:
            sys.exit(1)
        click.echo("warning: empty corpus; wrote empty report", err=True)
        return

    records = _parallel_map(lambda t: _score_record(t, plan_obj, cfg),
                            trajectories, jobs)
    lines = [json.dumps(rec, sort_keys=True) for rec in records]
    (out_dir / "scores.jsonl").write_text("\n".join(lines) + "\n",
                                          encoding="utf-8")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SCORE_CSV_FIELDS,
                            lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = dict(rec)
        row["missing_phases"] = " ".join(rec["missing_phases"])
        row["extra_phases"] = " ".join(rec["extra_phases"])
        row["first_occurrence_indices"] = " ".join(
            "-" if i is None else str(i)
            for i in rec["first_occurrence_indices"])
        writer.writerow(row)
    (out_dir / "scores.csv").write_text(buf.getvalue(), encoding="utf-8")

    summary_lines = ["model,difficulty,count,ppc_mean,poc_mean,ppf_mean,pc_mean"]
    for group in group_scores(records, ("model", "difficulty")):
        s = group.summary
        summary_lines.append(
            f"{group.keys['model']},{group.keys['difficulty']},"
            f"{len(group.values)},{s['ppc']['mean']:.6f},"
            f"{s['poc']['mean']:.6f},{s['ppf']['mean']:.6f},"
            f"{s['pc']['mean']:.6f}")
    (out_dir / "summary.csv").write_text("\n".join(summary_lines) + "\n",
                                         encoding="utf-8")
    _write_failures(out_dir, failures)
    click.echo(f"scored {len(records)} trajectories -> {out_dir}")


def _stratify(trajectories: list[TrajectoryRecord], by: str | None):
    if not by:
        return {"": trajectories}
    def key(t: TrajectoryRecord) -> str:
        if by == "difficulty":
            return t.difficulty.value
        if by == "resolved":
            return str(t.resolved).lower()
        if by == "model":
            return t.model_name
        raise click.UsageError(f"unknown stratification key {by!r}")
    strata: dict[str, list[TrajectoryRecord]] = {}
    for t in trajectories:
        strata.setdefault(key(t), []).append(t)
    return dict(sorted(strata.items()))


@main.command("flow")
@click.argument("inputs", nargs=-1)
@click.option("--format", "format_tag", default="canonical",
              type=click.Choice(["canonical", "swe-agent"]))
@click.option("--classifier-config", default=None, type=click.Path())
@click.option("--stages", default=DEFAULT_MAX_STAGES, type=int)
@click.option("--by", "stratify_by", default=None,
              type=click.Choice(["difficulty", "resolved", "model"]))
@click.option("--out", required=True, type=click.Path())
@click.option("--jobs", default=1, type=int)
def cmd_flow(inputs, format_tag, classifier_config, stages, stratify_by,
             out, jobs):
    """Aggregate phase transitions and emit Sankey data + SVG."""
    cfg = _load_classifier(classifier_config)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trajectories, failures = _load_inputs(tuple(inputs), format_tag)
    _write_failures(out_dir, failures)
    if not trajectories and failures:
        sys.exit(1)
    for label, group in _stratify(trajectories, stratify_by).items():
        langs = _parallel_map(
            lambda t: build_langutory(classify_trajectory(t, cfg)),
            group, jobs)
        table = build_flow(langs, max_stages=stages)
        suffix = f"_{stratify_by}={label}" if label else ""
        emit_sankey(table, out_dir / f"flow{suffix}.json",
                    out_dir / f"flow{suffix}.svg",
                    title=f"Phase flow{(' ' + label) if label else ''}")
    click.echo(f"flow over {len(trajectories)} trajectories -> {out_dir}")


@main.command("graph")
@click.argument("inputs", nargs=-1)
@click.option("--format", "format_tag", default="canonical",
              type=click.Choice(["canonical", "swe-agent"]))
@click.option("--out", required=True, type=click.Path())
@click.option("--export-graphs", is_flag=True, default=False)
def cmd_graph(inputs, format_tag, out, export_graphs):
    """Per-trajectory graph statistics (node, edge, loop counts)."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trajectories, failures = _load_inputs(tuple(inputs), format_tag)
    _write_failures(out_dir, failures)
    lines = ["trajectory_id,nc,tec,lc"]
    for traj in trajectories:
        g = build_graphectory(traj)
        s = graphectory_stats(g)
        lines.append(f"{traj.trajectory_id},{s.nc},{s.tec},{s.lc}")
        if export_graphs:
            gdir = out_dir / "graphs"
            gdir.mkdir(exist_ok=True)
            (gdir / f"{traj.trajectory_id}.txt").write_text(
                export_graph(g), encoding="utf-8")
    (out_dir / "graph_stats.csv").write_text("\n".join(lines) + "\n",
                                             encoding="utf-8")
    click.echo(f"graphed {len(trajectories)} trajectories -> {out_dir}")
    if not trajectories and failures:
        sys.exit(1)


@main.group("variants")
def cmd_variants():
    """Plan-setting prompt variants."""


@cmd_variants.command("list")
def variants_list():
    for name, setting in SETTING_CATALOGUE.items():
        formulation = ("-" if setting.spec is None else
                       " ".join(p.value for p in setting.spec.expected_sequence))
        click.echo(f"{name}\t{setting.variation_kind}\t{formulation}")


@cmd_variants.command("emit")
@click.option("--setting", required=True,
              type=click.Choice(sorted(SETTING_CATALOGUE)))
@click.option("--base", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def variants_emit(setting, base, out):
    base_prompt = Path(base).read_text(encoding="utf-8")
    rendered = render_prompt(SETTING_CATALOGUE[setting], base_prompt)
    Path(out).write_text(rendered, encoding="utf-8")
    click.echo(f"rendered {setting} -> {out}")


@main.command("compare")
@click.option("--a", "path_a", required=True, type=click.Path(exists=True))
@click.option("--b", "path_b", required=True, type=click.Path(exists=True))
@click.option("--test", "test_name", required=True,
              type=click.Choice(["mannwhitney", "mcnemar"]))
@click.option("--metric", default="pc",
              type=click.Choice(["ppc", "poc", "ppf", "pc"]))
@click.option("--out", default=None, type=click.Path())
def cmd_compare(path_a, path_b, test_name, metric, out):
    """Statistical comparison of two score files."""
    recs_a = read_score_records(path_a)
    recs_b = read_score_records(path_b)
    if test_name == "mannwhitney":
        u, p = mann_whitney_u([r[metric] for r in recs_a],
                              [r[metric] for r in recs_b])
        result = f"mannwhitney metric={metric} U={u:.6g} p={p:.6g}"
    else:
        by_a = {r["instance_id"]: bool(r.get("resolved")) for r in recs_a}
        by_b = {r["instance_id"]: bool(r.get("resolved")) for r in recs_b}
        shared = sorted(set(by_a) & set(by_b))
        if not shared:
            raise click.UsageError("no shared instance ids to pair")
        stat, p = mcnemar([(by_a[i], by_b[i]) for i in shared])
        result = f"mcnemar pairs={len(shared)} statistic={stat:.6g} p={p:.6g}"
    click.echo(result)
    if out:
        Path(out).write_text(result + "\n", encoding="utf-8")


@main.command("intersect")
@click.option("--settings", "files", multiple=True, required=True,
              type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def cmd_intersect(files, out):
    """Exclusive intersections of resolved instances across settings."""
    corpora: dict[str, list[dict]] = {}
    for path in files:
        records = read_score_records(path)
        if not records:
            raise click.UsageError(f"{path}: empty score file")
        name = records[0].get("setting") or Path(path).stem
        corpora[name] = records
    maps = {name: {r["instance_id"]: bool(r.get("resolved")) for r in recs}
            for name, recs in corpora.items()}
    names = sorted(maps)
    base = set(maps[names[0]])
    for name in names[1:]:
        if set(maps[name]) != base:
            raise click.UsageError(
                f"settings {names[0]!r} and {name!r} cover different instances")
    counts: dict[frozenset[str], int] = {}
    for iid in base:
        member = frozenset(n for n in names if maps[n][iid])
        if member:
            counts[member] = counts.get(member, 0) + 1
    lines = ["settings,count"]
    for member in sorted(counts, key=lambda m: (len(m), sorted(m))):
        lines.append("+".join(sorted(member)) + f",{counts[member]}")
    Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    click.echo(f"intersections over {len(names)} settings -> {out}")


@main.command("report")
@click.option("--scores", "scores_path", required=True, type=click.Path())
@click.option("--intersect", "intersect_path", default=None, type=click.Path())
@click.option("--compare", "compare_path", default=None, type=click.Path())
@click.option("--out", required=True, type=click.Path())
def cmd_report(scores_path, intersect_path, compare_path, out):
    """Consolidated plain-text + CSV report from prior outputs."""
    if not Path(scores_path).exists():
        raise click.UsageError(f"missing input artifact: {scores_path}")
    records = read_score_records(scores_path)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    text = ["plan compliance report", "=" * 60, ""]
    csv_lines = ["model,difficulty,count,ppc,poc,ppf,pc"]
    text.append(f"{'model':20s} {'difficulty':10s} {'n':>5s} "
                f"{'PPC':>6s} {'POC':>6s} {'PPF':>6s} {'PC':>6s}")
    for group in group_scores(records, ("model", "difficulty")):
        s = group.summary
        model = group.keys["model"]
        diff = group.keys["difficulty"]
        text.append(f"{model:20s} {diff:10s} {len(group.values):>5d} "
                    f"{s['ppc']['mean']:>6.2f} {s['poc']['mean']:>6.2f} "
                    f"{s['ppf']['mean']:>6.2f} {s['pc']['mean']:>6.2f}")
        csv_lines.append(f"{model},{diff},{len(group.values)},"
                         f"{s['ppc']['mean']!r},{s['poc']['mean']!r},"
                         f"{s['ppf']['mean']!r},{s['pc']['mean']!r}")
    text.append("")

    if intersect_path:
        if not Path(intersect_path).exists():
            raise click.UsageError(f"missing input artifact: {intersect_path}")
        text.append("resolved-instance intersections")
        text.append("-" * 40)
        text.append(Path(intersect_path).read_text(encoding="utf-8").rstrip())
        text.append("")
    if compare_path:
        if not Path(compare_path).exists():
            raise click.UsageError(f"missing input artifact: {compare_path}")
        text.append("statistical tests")
        text.append("-" * 40)
        text.append(Path(compare_path).read_text(encoding="utf-8").rstrip())
        text.append("")
    if not intersect_path and not compare_path:
        text.append("(no statistical test inputs provided; section omitted)")
        text.append("")

    (out_dir / "report.txt").write_text("\n".join(text) + "\n",
                                        encoding="utf-8")
    (out_dir / "report.csv").write_text("\n".join(csv_lines) + "\n",
                                        encoding="utf-8")
    click.echo(f"report -> {out_dir}")


if __name__ == "__main__":
    main()
