"""Command-line pipeline: extraction, splitting, training, and audit reports.

Every subcommand reads an optional TOML config plus flag overrides (flags
win) and stamps its outputs with a schema version, config hash, and seed.
"""
from __future__ import annotations

import dataclasses
import json
import sys
from collections import Counter, defaultdict

import click

from . import audit as audit_mod
from . import simulate as simulate_mod
from .config import SCHEMA_VERSION, RunConfig, resolve_config
from .corpus import (
    OccupationLexicon,
    default_lexicon,
    dedup,
    extract_records,
    read_jsonl,
    stratified_split,
    write_jsonl,
)
from .errors import ConfigError, DataError, NumericError, OccauditError
from .pipeline import (
    accuracy,
    load_stack,
    predict_records,
    predict_texts,
    record_text,
    train_stack,
)
from .proxy import (
    aggregate_attention,
    attention_histograms,
    histogram_shift,
    histograms_to_csv,
    proxy_candidates,
)
from .represent import build_vocab, load_embeddings, save_embeddings, synth_embeddings, tokenize
from .reports import svg_histogram_pair, svg_scatter, svg_trace_panel
from .scrub import DEFAULT_INDICATORS, IndicatorConfig, scrub, swap_indicators


def _provenance_comment(cfg: RunConfig) -> str:
    p = cfg.provenance()
    return (f"schema_version={p['schema_version']} "
            f"config_hash={p['config_hash']} seed={p['seed']}")


def _stamp_csv(path, cfg: RunConfig) -> None:
    with open(path, encoding="utf-8", newline="") as fh:
        body = fh.read()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {_provenance_comment(cfg)}\n{body}")


def _stamp_svg(path, cfg: RunConfig) -> None:
    with open(path, encoding="utf-8") as fh:
        body = fh.read()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"<!-- {_provenance_comment(cfg)} -->\n{body}")


def _write_json(path, payload: dict, cfg: RunConfig) -> None:
    out = dict(cfg.provenance())
    out.update(payload)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(out, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _read_csv_rows(path) -> list[dict]:
    import csv

    with open(path, newline="", encoding="utf-8") as fh:
        lines = (line for line in fh if not line.startswith("#"))
        return list(csv.DictReader(lines))


def _lexicon(cfg: RunConfig) -> OccupationLexicon:
    if cfg.lexicon:
        return OccupationLexicon.from_tsv(cfg.lexicon)
    return default_lexicon()


def _indicators(cfg: RunConfig) -> IndicatorConfig:
    if cfg.indicators:
        return IndicatorConfig.from_tsv(cfg.indicators)
    return DEFAULT_INDICATORS


def _table_for(stack_rep: str, cfg: RunConfig):
    if stack_rep == "bow":
        return None
    if not cfg.embeddings:
        raise ConfigError(f"representation {stack_rep!r} requires --embeddings")
    return load_embeddings(cfg.embeddings)


def _parse_ratios(_ctx, _param, value):
    if value is None:
        return None
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError as exc:
        raise click.BadParameter(f"cannot parse ratios {value!r}") from exc


def _parse_floats(_ctx, _param, value):
    if value is None:
        return None
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError as exc:
        raise click.BadParameter(f"cannot parse list {value!r}") from exc


_config_opt = click.option("--config", "config_path", type=click.Path(exists=True),
                           default=None, help="TOML config file; flags override it.")
_seed_opt = click.option("--seed", type=int, default=None)
_embeddings_opt = click.option("--embeddings", type=click.Path(exists=True), default=None)


@click.group()
def cli():
    """Occupation-bias audit pipeline."""


@cli.command()
@click.argument("inputs", nargs=-1, type=click.Path(exists=True))
@click.option("--lexicon", type=click.Path(exists=True), default=None)
@click.option("--output", required=True, type=click.Path())
@click.option("--stats", "stats_path", type=click.Path(), default=None)
@_config_opt
@_seed_opt
def extract(inputs, lexicon, output, stats_path, config_path, seed):
    """Extract biography records from line-oriented text files."""
    cfg = resolve_config(config_path, lexicon=lexicon, seed=seed)
    lex = _lexicon(cfg)
    lines = []
    malformed = 0
    for path in inputs:
        with open(path, "rb") as fh:
            for raw in fh.read().splitlines():
                try:
                    lines.append(raw.decode("utf-8"))
                except UnicodeDecodeError:
                    malformed += 1
    records, stats = extract_records(lines, lex)
    n_before = len(records)
    records = dedup(records)
    write_jsonl(records, output)
    per_occupation = Counter(r.occupation for r in records)
    payload = {
        "n_records": len(records),
        "n_before_dedup": n_before,
        "malformed_utf8": malformed,
        "discards": {k: v for k, v in sorted(stats.items())},
        "per_occupation": {k: v for k, v in sorted(per_occupation.items())},
    }
    if stats_path:
        _write_json(stats_path, payload, cfg)
    click.echo(f"extracted {len(records)} records from {len(inputs)} file(s)")


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output-dir", required=True, type=click.Path())
@click.option("--ratios", callback=_parse_ratios, default=None,
              help="train,validation,test fractions (default 0.65,0.1,0.25)")
@_config_opt
@_seed_opt
def split(input_path, output_dir, ratios, config_path, seed):
    """Stratified train/validation/test split of a record file."""
    import os

    cfg = resolve_config(config_path, ratios=ratios, seed=seed)
    records = read_jsonl(input_path)
    split_set = stratified_split(records, cfg.ratios, cfg.seed)
    os.makedirs(output_dir, exist_ok=True)
    parts = {
        "train": split_set.train,
        "validation": split_set.validation,
        "test": split_set.test,
    }
    for name, part in parts.items():
        write_jsonl(part, os.path.join(output_dir, f"{name}.jsonl"))
    _write_json(
        os.path.join(output_dir, "split.json"),
        {"ratios": list(cfg.ratios), "sizes": {k: len(v) for k, v in parts.items()}},
        cfg,
    )
    click.echo(f"split {len(records)} records: "
               + ", ".join(f"{k}={len(v)}" for k, v in parts.items()))


@cli.command("scrub")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["scrub", "swap"]), default="scrub")
@click.option("--indicators", type=click.Path(exists=True), default=None)
@_config_opt
def scrub_cmd(input_path, output, mode, indicators, config_path):
    """Remove or swap explicit gender indicators in every record."""
    cfg = resolve_config(config_path, indicators=indicators)
    ind = _indicators(cfg)
    transform = scrub if mode == "scrub" else swap_indicators
    records = [
        dataclasses.replace(bio, feature_text=transform(bio, ind))
        for bio in read_jsonl(input_path)
    ]
    write_jsonl(records, output)
    verb = "scrubbed" if mode == "scrub" else "swapped"
    click.echo(f"{verb} indicators in {len(records)} records")


@cli.command()
@click.option("--train", "train_path", required=True, type=click.Path(exists=True))
@click.option("--valid", "valid_path", type=click.Path(exists=True), default=None)
@click.option("--model-out", required=True, type=click.Path())
@click.option("--log", "log_path", type=click.Path(), default=None)
@click.option("--rep", type=click.Choice(["bow", "we", "dnn"]), default=None)
@click.option("--condition", type=click.Choice(["with", "without"]), default=None)
@click.option("--target", type=click.Choice(["occupation", "gender"]), default=None)
@click.option("--min-freq", type=int, default=None)
@click.option("--synth-dim", type=int, default=None)
@click.option("--embeddings-out", type=click.Path(), default=None)
@click.option("--lam", type=float, default=None)
@click.option("--max-epochs", type=int, default=None)
@click.option("--hidden", type=int, default=None)
@click.option("--attn-dim", type=int, default=None)
@click.option("--lr", type=float, default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--batch-size", type=int, default=None)
@_embeddings_opt
@_config_opt
@_seed_opt
def train(train_path, valid_path, model_out, log_path, rep, condition, target,
          min_freq, synth_dim, embeddings_out, lam, max_epochs, hidden, attn_dim,
          lr, epochs, batch_size, embeddings, config_path, seed):
    """Train one classifier stack and serialize it."""
    cfg = resolve_config(
        config_path, rep=rep, condition=condition, target=target, seed=seed,
        min_freq=min_freq, synth_dim=synth_dim, embeddings=embeddings, lam=lam,
        max_epochs=max_epochs, hidden=hidden, attn_dim=attn_dim, lr=lr,
        epochs=epochs, batch_size=batch_size,
    )
    ind = _indicators(cfg)
    train_records = read_jsonl(train_path)
    valid_records = read_jsonl(valid_path) if valid_path else None

    table = None
    emb_path = cfg.embeddings
    if cfg.rep != "bow":
        if emb_path:
            table = load_embeddings(emb_path)
        else:
            texts = [tokenize(record_text(b, cfg.condition, ind)) for b in train_records]
            vocab = build_vocab(texts, min_freq=cfg.min_freq)
            table = synth_embeddings(vocab, dim=cfg.synth_dim, seed=cfg.seed)
            emb_path = embeddings_out or f"{model_out}.emb.txt"
            save_embeddings(table, emb_path)

    stack = train_stack(
        train_records, cfg.rep, cfg.condition, target=cfg.target, table=table,
        valid_records=valid_records, min_freq=cfg.min_freq,
        linear_config=cfg.linear_config(), rnn_config=cfg.rnn_config(),
        seed=cfg.seed, indicators=ind,
    )
    from .pipeline import save_stack

    save_stack(stack, model_out)
    train_acc = accuracy(stack, train_records, table)
    payload = {
        "rep": cfg.rep,
        "condition": cfg.condition,
        "target": cfg.target,
        "train_accuracy": train_acc,
        "embeddings": emb_path,
        "model": str(model_out),
    }
    if valid_records:
        payload["validation_accuracy"] = accuracy(stack, valid_records, table)
    if log_path:
        _write_json(log_path, payload, cfg)
    click.echo(f"trained {cfg.rep}/{cfg.condition}/{cfg.target}: "
               f"train accuracy {train_acc:.4f}")


@cli.command("eval")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--output", type=click.Path(), default=None)
@_embeddings_opt
@_config_opt
def eval_cmd(model_path, data_path, output, embeddings, config_path):
    """Accuracy of a serialized stack on a record file."""
    cfg = resolve_config(config_path, embeddings=embeddings)
    stack = load_stack(model_path)
    table = _table_for(stack.rep, cfg)
    records = read_jsonl(data_path)
    acc = accuracy(stack, records, table)
    if output:
        _write_json(output, {"accuracy": acc, "n_records": len(records),
                             "rep": stack.rep, "condition": stack.condition,
                             "target": stack.target}, cfg)
    click.echo(f"accuracy {acc:.4f} on {len(records)} records")


@cli.command("audit")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--output-dir", required=True, type=click.Path())
@click.option("--min-freq", type=int, default=None)
@_embeddings_opt
@_config_opt
def audit_cmd(model_path, data_path, output_dir, min_freq, embeddings, config_path):
    """TPR gender gaps, gap-imbalance correlation, and word-gender scatter."""
    import os

    cfg = resolve_config(config_path, embeddings=embeddings, min_freq=min_freq)
    stack = load_stack(model_path)
    table = _table_for(stack.rep, cfg)
    records = read_jsonl(data_path)
    preds = predict_records(stack, records, table)
    gaps = audit_mod.gap_table(preds, [b.occupation for b in records],
                               [b.gender for b in records])
    os.makedirs(output_dir, exist_ok=True)
    gaps_csv = os.path.join(output_dir, "gaps.csv")
    gaps.to_csv(gaps_csv)
    _stamp_csv(gaps_csv, cfg)

    points = [(r.pi_female, r.gap_female, r.occupation)
              for r in gaps.rows if r.gap_female is not None]
    gaps_svg = os.path.join(output_dir, "gaps.svg")
    svg_scatter(points, gaps_svg, xlabel="female share of occupation",
                ylabel="female TPR gap", title="TPR gap vs gender imbalance")
    _stamp_svg(gaps_svg, cfg)

    token_lists = [tokenize(record_text(b, stack.condition)) for b in records]
    vocab = build_vocab(token_lists, min_freq=cfg.min_freq)
    scatter = audit_mod.word_gender_scatter(token_lists,
                                            [b.gender for b in records], vocab)
    words_csv = os.path.join(output_dir, "words.csv")
    scatter.to_csv(words_csv)
    _stamp_csv(words_csv, cfg)
    labeled = sorted(scatter.points, key=lambda p: -abs(p.corr_female))[:10]
    label_set = {p.token for p in labeled}
    words_svg = os.path.join(output_dir, "words.svg")
    svg_scatter(
        [(p.log10_freq, p.corr_female, p.token if p.token in label_set else "")
         for p in scatter.points],
        words_svg, xlabel="log10 frequency", ylabel="correlation with female",
        title="word frequency vs gender correlation",
    )
    _stamp_svg(words_svg, cfg)

    payload = {
        "rep": stack.rep,
        "condition": stack.condition,
        "n_records": len(records),
        "mean_abs_gap": gaps.mean_abs_gap(),
        "gap_imbalance_correlation": audit_mod.gap_imbalance_correlation(gaps),
        "n_occupations": len(gaps.rows),
    }
    _write_json(os.path.join(output_dir, "audit.json"), payload, cfg)
    click.echo(f"audited {len(records)} records across {len(gaps.rows)} occupations")


@cli.command("swap")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--output-dir", required=True, type=click.Path())
@click.option("--top-k", type=int, default=None)
@click.option("--min-support", type=int, default=None)
@click.option("--indicators", type=click.Path(exists=True), default=None)
@_embeddings_opt
@_config_opt
def swap_cmd(model_path, data_path, output_dir, top_k, min_support, indicators,
             embeddings, config_path):
    """Counterfactual audit comparing original and gender-swapped inputs."""
    import os

    cfg = resolve_config(config_path, embeddings=embeddings, top_k=top_k,
                         min_support=min_support, indicators=indicators)
    stack = load_stack(model_path)
    table = _table_for(stack.rep, cfg)
    records = read_jsonl(data_path)
    report = audit_mod.swap_audit(
        lambda text: predict_texts(stack, [text], table)[0],
        records, _indicators(cfg), top_k=cfg.top_k, min_support=cfg.min_support,
    )
    os.makedirs(output_dir, exist_ok=True)
    swap_csv = os.path.join(output_dir, "swap.csv")
    report.to_csv(swap_csv)
    _stamp_csv(swap_csv, cfg)
    payload = {
        "n_records": report.n_records,
        "n_changed": report.n_changed,
        "change_rate": report.change_rate,
        "top_pairs": {
            gender: [
                {"from": p.from_label, "to": p.to_label, "count": p.count,
                 "total": p.total, "pi_percent": p.pi_percent}
                for p in pairs
            ]
            for gender, pairs in report.top_pairs.items()
        },
    }
    _write_json(os.path.join(output_dir, "swap.json"), payload, cfg)
    click.echo(f"swap audit: {report.n_changed}/{report.n_records} predictions changed")


@cli.command("probe")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--output", type=click.Path(), default=None)
@_embeddings_opt
@_config_opt
def probe_cmd(model_path, data_path, output, embeddings, config_path):
    """Gender recoverability of a probe split under a gender-target stack."""
    cfg = resolve_config(config_path, embeddings=embeddings)
    stack = load_stack(model_path)
    if stack.target != "gender":
        raise ConfigError(f"probe requires a gender-target model, got {stack.target!r}")
    table = _table_for(stack.rep, cfg)
    records = read_jsonl(data_path)
    preds = predict_records(stack, records, table)
    acc = audit_mod.probe_accuracy(preds, [b.gender for b in records])
    if output:
        _write_json(output, {"probe_accuracy": acc, "n_records": len(records),
                             "condition": stack.condition}, cfg)
    click.echo(f"probe accuracy {acc:.4f} on {len(records)} records")


@cli.command("simulate")
@click.option("--gaps", "gaps_path", required=True, type=click.Path(exists=True),
              help="gap table CSV produced by the audit command")
@click.option("--pi0", callback=_parse_floats, default="0.1,0.2,0.3,0.4",
              help="comma-separated initial shares")
@click.option("--horizon", type=int, default=None)
@click.option("--grid-n", type=int, default=None)
@click.option("--grid-lo", type=float, default=None)
@click.option("--grid-hi", type=float, default=None)
@click.option("--output-dir", required=True, type=click.Path())
@_config_opt
def simulate_cmd(gaps_path, pi0, horizon, grid_n, grid_lo, grid_hi, output_dir,
                 config_path):
    """Iterate the compounding-imbalance dynamics from a fitted gap model."""
    import os

    cfg = resolve_config(config_path, horizon=horizon, grid_n=grid_n,
                         grid_lo=grid_lo, grid_hi=grid_hi)
    gaps = audit_mod.GapTable.from_csv(gaps_path)
    regression = simulate_mod.fit_gap_regression(gaps.defined_points())
    grid = simulate_mod.default_tpr_grid(cfg.grid_n, cfg.grid_lo, cfg.grid_hi)
    traces = [simulate_mod.run(p, cfg.horizon, regression, grid) for p in pi0]
    os.makedirs(output_dir, exist_ok=True)
    traces_csv = os.path.join(output_dir, "traces.csv")
    simulate_mod.traces_to_csv(traces, traces_csv)
    _stamp_csv(traces_csv, cfg)
    traces_svg = os.path.join(output_dir, "traces.svg")
    svg_trace_panel([(t.pi0, t.to_rows()) for t in traces], traces_svg,
                    title="compounding gender imbalance")
    _stamp_svg(traces_svg, cfg)
    _write_json(
        os.path.join(output_dir, "simulate.json"),
        {"slope": regression.slope, "intercept": regression.intercept,
         "rss": regression.rss, "n_points": regression.n_points,
         "horizon": cfg.horizon, "pi0": list(pi0)},
        cfg,
    )
    click.echo(f"simulated {len(traces)} trajectories over {cfg.horizon} steps")


@cli.command("proxy")
@click.option("--gender-model", required=True, type=click.Path(exists=True),
              help="recurrent gender classifier trained on scrubbed text")
@click.option("--with-model", required=True, type=click.Path(exists=True),
              help="recurrent occupation classifier trained with indicators")
@click.option("--without-model", required=True, type=click.Path(exists=True),
              help="recurrent occupation classifier trained on scrubbed text")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--top-k", type=int, default=None)
@click.option("--bins", type=int, default=None)
@click.option("--word", default=None, help="inspect this word instead of the top candidate")
@click.option("--indicators", type=click.Path(exists=True), default=None)
@click.option("--output-dir", required=True, type=click.Path())
@_embeddings_opt
@_config_opt
def proxy_cmd(gender_model, with_model, without_model, data_path, top_k, bins,
              word, indicators, output_dir, embeddings, config_path):
    """Attention-ranked proxy candidates and per-occupation attention histograms."""
    import os

    cfg = resolve_config(config_path, embeddings=embeddings, top_k=top_k,
                         bins=bins, indicators=indicators)
    stacks = {name: load_stack(path) for name, path in
              [("gender", gender_model), ("with", with_model), ("without", without_model)]}
    for name, stack in stacks.items():
        if stack.rep != "dnn":
            raise ConfigError(f"proxy detection needs recurrent models; "
                              f"{name} model is {stack.rep!r}")
    if not cfg.embeddings:
        raise ConfigError("proxy detection requires --embeddings")
    table = load_embeddings(cfg.embeddings)
    ind = _indicators(cfg)
    records = read_jsonl(data_path)
    tokens_with = [tokenize(b.feature_text) for b in records]
    tokens_without = [tokenize(record_text(b, "without", ind)) for b in records]

    agg = aggregate_attention(stacks["gender"].model, tokens_without, table)
    candidates = proxy_candidates(agg, cfg.top_k, exclude=ind.scrub_list)
    os.makedirs(output_dir, exist_ok=True)
    attn_csv = os.path.join(output_dir, "attention.csv")
    agg.to_csv(attn_csv)
    _stamp_csv(attn_csv, cfg)

    payload = {"candidates": candidates, "n_records": len(records)}
    target = word or (candidates[0] if candidates else None)
    if target is not None:
        hists = attention_histograms(
            stacks["with"].model, stacks["without"].model, target,
            list(zip(records, tokens_with)), list(zip(records, tokens_without)),
            table, bins=cfg.bins,
        )
        hist_csv = os.path.join(output_dir, "histograms.csv")
        histograms_to_csv(hists, hist_csv)
        _stamp_csv(hist_csv, cfg)
        hist_svg = os.path.join(output_dir, "histograms.svg")
        svg_histogram_pair(
            target,
            [(occ, list(hw.edges), list(hw.counts), list(hwo.counts))
             for occ, (hw, hwo) in hists.items()],
            hist_svg,
        )
        _stamp_svg(hist_svg, cfg)
        payload["word"] = target
        payload["shifts"] = {
            occ: histogram_shift(hw, hwo)
            for occ, (hw, hwo) in hists.items()
            if not hw.is_empty and not hwo.is_empty
        }
    _write_json(os.path.join(output_dir, "proxy.json"), payload, cfg)
    click.echo(f"proxy candidates: {', '.join(candidates) if candidates else '(none)'}")


@cli.command("report")
@click.option("--output-dir", required=True, type=click.Path(exists=True),
              help="directory holding previously emitted CSV reports")
@_config_opt
def report_cmd(output_dir, config_path):
    """Re-render SVG figures from the CSV reports present in a directory."""
    import os

    cfg = resolve_config(config_path)
    rendered = []

    gaps_csv = os.path.join(output_dir, "gaps.csv")
    if os.path.exists(gaps_csv):
        gaps = audit_mod.GapTable.from_csv(gaps_csv)
        points = [(r.pi_female, r.gap_female, r.occupation)
                  for r in gaps.rows if r.gap_female is not None]
        out = os.path.join(output_dir, "gaps.svg")
        svg_scatter(points, out, xlabel="female share of occupation",
                    ylabel="female TPR gap", title="TPR gap vs gender imbalance")
        _stamp_svg(out, cfg)
        rendered.append("gaps.svg")

    traces_csv = os.path.join(output_dir, "traces.csv")
    if os.path.exists(traces_csv):
        groups: dict[str, list] = defaultdict(list)
        pi0s: dict[str, float] = {}
        for row in _read_csv_rows(traces_csv):
            groups[row["subplot"]].append(
                (int(row["t"]), float(row["central"]),
                 float(row["band_lo"]), float(row["band_hi"]))
            )
            pi0s[row["subplot"]] = float(row["pi0"])
        traces = [(pi0s[k], sorted(groups[k])) for k in sorted(groups, key=int)]
        out = os.path.join(output_dir, "traces.svg")
        svg_trace_panel(traces, out, title="compounding gender imbalance")
        _stamp_svg(out, cfg)
        rendered.append("traces.svg")

    hist_csv = os.path.join(output_dir, "histograms.csv")
    if os.path.exists(hist_csv):
        rows = _read_csv_rows(hist_csv)
        if rows:
            word = rows[0]["word"]
            cells: dict[str, dict] = {}
            for row in rows:
                cell = cells.setdefault(row["occupation"],
                                        {"edges": [], "with": [], "without": []})
                if row["condition"] == "with":
                    cell["edges"].append(float(row["bin_lo"]))
                    cell["last_hi"] = float(row["bin_hi"])
                cell[row["condition"]].append(int(row["count"]))
            out = os.path.join(output_dir, "histograms.svg")
            svg_histogram_pair(
                word,
                [(occ, c["edges"] + [c["last_hi"]], c["with"], c["without"])
                 for occ, c in cells.items()],
                out,
            )
            _stamp_svg(out, cfg)
            rendered.append("histograms.svg")

    _write_json(os.path.join(output_dir, "report.json"), {"rendered": rendered}, cfg)
    click.echo(f"rendered {len(rendered)} figure(s)")


def main(argv=None) -> int:
    """Entry point mapping domain failures onto documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.Abort:
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except OccauditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
