"""Command-line entry point wiring corpus build, translation, metric runs,
ranking, and bias-index scoring.

Exit codes: 0 success, 1 computation error, 2 usage or input error. Every
JSON report embeds a provenance block (input hashes, seed, flags) and no
timestamps, so re-running a command on the same inputs produces
byte-identical output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .eec import (
    DEFAULT_PRONOUNS,
    PronounSpec,
    build_views,
    generate_utterances,
    load_lexicon,
    read_corpus_tsv,
    read_views_json,
    write_corpus_tsv,
    write_views_json,
)
from .embeddings import DEFAULT_LOST_THRESHOLD, load_word2vec_text
from .errors import BiasEvalError, EmbeddingFormatError, TranslationRunError
from .metrics import DEFAULT_CLASSIFIER_HYPER, METRIC_NAMES, METRIC_TEMPLATES
from .queries import expand_subqueries, load_queries, subquery_count
from .ranking import (
    AGGREGATIONS,
    build_rank_table,
    build_score_matrix,
    rank_table_csv,
    rank_table_to_dict,
    render_rank_table,
    render_score_matrix,
    score_matrix_csv,
    score_matrix_to_dict,
)
from .tgbi import (
    AMBIGUOUS_POLICIES,
    DEFAULT_GENDER_LEXICON,
    VARIANT_LINEAR,
    VARIANTS,
    load_gender_lexicon,
    render_tgbi_table,
    report_to_dict,
    score_views,
)
from .translate import (
    BackendConfig,
    DEFAULT_MIN_COVERAGE,
    fetch_translations_http,
    join,
    load_translations_tsv,
    write_translations_tsv,
)

DEFAULT_SEED = 42


def _sha256(path) -> str:
    digest = hashlib.sha256()
    digest.update(Path(path).read_bytes())
    return digest.hexdigest()


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _provenance(inputs: dict, seed: int, flags: dict) -> dict:
    block = {
        "version": __version__,
        "seed": seed,
        "flags": flags,
        "inputs": {},
    }
    for label, value in inputs.items():
        if isinstance(value, (str, Path)):
            block["inputs"][label] = {"path": str(value), "sha256": _sha256(value)}
        else:
            block["inputs"][label] = value
    return block


def _write_json(payload: dict, path) -> None:
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


def _require_file(path, what: str) -> Path:
    if path is None:
        raise ValueError(f"missing required input: {what}")
    resolved = Path(path)
    if not resolved.is_file():
        raise FileNotFoundError(f"{what} not found: {resolved}")
    return resolved


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_config(path) -> dict:
    if not path:
        return {}
    config_path = _require_file(path, "config file")
    data = json.loads(config_path.read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{config_path}: config must be a JSON object")
    return data


def _opt(args, config: dict, key: str, default):
    """Effective option value: flag wins over config file wins over default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _load_pronouns(path):
    if not path:
        return DEFAULT_PRONOUNS
    data = json.loads(_require_file(path, "pronoun spec file").read_text(encoding="utf-8"))
    return tuple(PronounSpec(d["surface"], d["register"], d["copula"]) for d in data)


def _load_templates(path):
    if not path:
        return None
    data = json.loads(_require_file(path, "template file").read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{path}: templates must map lexicon category to a format string")
    return data


def cmd_eec(args) -> int:
    config = _load_config(args.config)
    seed = int(_opt(args, config, "seed", DEFAULT_SEED))
    occupations = _require_file(_opt(args, config, "occupations", None), "occupation lexicon")
    positive = _require_file(_opt(args, config, "positive", None), "positive lexicon")
    negative = _require_file(_opt(args, config, "negative", None), "negative lexicon")
    out_dir = _out_dir(_opt(args, config, "out_dir", "eec_out"))
    pronouns = _load_pronouns(_opt(args, config, "pronouns", None))
    templates = _load_templates(_opt(args, config, "templates", None))

    lexicons = [
        load_lexicon(occupations, "occupation"),
        load_lexicon(positive, "positive"),
        load_lexicon(negative, "negative"),
    ]
    utterances = generate_utterances(lexicons, pronouns, templates)
    views = build_views(utterances)

    write_corpus_tsv(utterances, out_dir / "corpus.tsv")
    write_views_json(views, out_dir / "views.json")
    meta = {
        "provenance": _provenance(
            {"occupations": occupations, "positive": positive, "negative": negative},
            seed,
            {"pronoun_registers": [p.register for p in pronouns]},
        ),
        "n_utterances": len(utterances),
        "view_sizes": {view.name: len(view) for view in views},
    }
    _write_json(meta, out_dir / "run_meta.json")
    for view in views:
        print(f"{view.name}\t{len(view)}")
    return 0


def cmd_translate(args) -> int:
    config = _load_config(args.config)
    corpus_path = _require_file(_opt(args, config, "corpus", None), "corpus TSV")
    backend = _opt(args, config, "backend", "file")
    out = Path(_opt(args, config, "out", "translations_out.tsv"))
    min_coverage = float(_opt(args, config, "min_coverage", DEFAULT_MIN_COVERAGE))
    corpus = read_corpus_tsv(corpus_path)

    if backend == "file":
        records = load_translations_tsv(
            _require_file(_opt(args, config, "translations", None), "translations TSV")
        )
        join(corpus, records, min_coverage=min_coverage)
        write_translations_tsv(records, out)
    elif backend == "http":
        url = _opt(args, config, "url", None)
        if not url:
            raise ValueError("http backend needs --url")
        cfg = BackendConfig(
            "http",
            url,
            timeout=float(_opt(args, config, "timeout", 10.0)),
            retry_count=int(_opt(args, config, "retries", 2)),
            max_in_flight=int(_opt(args, config, "max_in_flight", 4)),
        )
        existing = load_translations_tsv(out) if out.is_file() else []
        have = {record.id for record in existing}
        todo = [utterance for utterance in corpus if utterance.id not in have]
        try:
            fetched = fetch_translations_http(cfg, todo)
        except TranslationRunError as exc:
            merged = _merge_records(corpus, existing, exc.completed)
            write_translations_tsv(merged, out)
            raise TranslationRunError(
                f"{exc}; wrote {len(merged)} row(s) to {out} "
                f"(completed ids: {[record.id for record in merged]}); rerun to resume",
                completed=merged,
            ) from None
        merged = _merge_records(corpus, existing, fetched)
        join(corpus, merged, min_coverage=min_coverage)
        write_translations_tsv(merged, out)
    else:
        raise ValueError(f"unknown backend '{backend}' (expected 'file' or 'http')")
    print(f"wrote {out}")
    return 0


def _merge_records(corpus, existing, fetched):
    by_id = {record.id: record for record in existing}
    by_id.update({record.id: record for record in fetched})
    ordered = [by_id[utterance.id] for utterance in corpus if utterance.id in by_id]
    extras = [record for record_id, record in sorted(by_id.items())
              if record_id not in {u.id for u in corpus}]
    return ordered + extras


def cmd_tgbi(args) -> int:
    config = _load_config(args.config)
    seed = int(_opt(args, config, "seed", DEFAULT_SEED))
    corpus_path = _require_file(_opt(args, config, "corpus", None), "corpus TSV")
    views_path = _require_file(_opt(args, config, "views", None), "views manifest")
    translations_path = _require_file(
        _opt(args, config, "translations", None), "translations TSV"
    )
    out_dir = _out_dir(_opt(args, config, "out_dir", "tgbi_out"))
    variant = _opt(args, config, "variant", VARIANT_LINEAR)
    ambiguous_policy = _opt(args, config, "ambiguous_policy", "unresolved")
    min_coverage = float(_opt(args, config, "min_coverage", DEFAULT_MIN_COVERAGE))
    lexicon_path = _opt(args, config, "gender_lexicon", None)

    if lexicon_path:
        lexicon_file = _require_file(lexicon_path, "gender lexicon")
        lexicon = load_gender_lexicon(lexicon_file)
        lexicon_hash = _sha256(lexicon_file)
    else:
        lexicon = DEFAULT_GENDER_LEXICON
        lexicon_hash = _sha256_text(
            json.dumps(
                {
                    "she": sorted(lexicon.she_words),
                    "he": sorted(lexicon.he_words),
                    "they": sorted(lexicon.they_words),
                },
                sort_keys=True,
            )
        )

    corpus = read_corpus_tsv(corpus_path)
    views = read_views_json(views_path)
    records = load_translations_tsv(translations_path)
    pairs = join(corpus, records, min_coverage=min_coverage)
    report = score_views(views, pairs, lexicon, variant=variant,
                         ambiguous_policy=ambiguous_policy)

    payload = {
        "provenance": _provenance(
            {
                "corpus": corpus_path,
                "views": views_path,
                "translations": translations_path,
                "gender_lexicon": {"sha256": lexicon_hash},
            },
            seed,
            {"variant": variant, "ambiguous_policy": ambiguous_policy},
        ),
    }
    payload.update(report_to_dict(report))
    _write_json(payload, out_dir / "tgbi_report.json")
    table = render_tgbi_table(report)
    (out_dir / "tgbi_table.txt").write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


def _parse_embedding_specs(specs):
    tables = []
    for spec in specs:
        if "=" in spec:
            name, _, location = spec.partition("=")
        else:
            name, location = Path(spec).stem, spec
        tables.append(load_word2vec_text(_require_file(location, "embedding file"), name))
    return tables


def _load_all_queries(paths):
    queries = []
    for path in paths:
        queries.extend(load_queries(_require_file(path, "query file")))
    return queries


def _check_templates(queries, metrics, skip_invalid: bool) -> list:
    """Usage-error on any query that cannot satisfy a requested metric's
    template, unless told to skip such queries."""
    kept = list(queries)
    for metric in metrics:
        template = METRIC_TEMPLATES[metric]
        bad = [q for q in kept if subquery_count(q, template) == 0]
        if bad and not skip_invalid:
            labels = ", ".join(f"'{q.label}'" for q in bad)
            raise ValueError(
                f"query {labels} does not satisfy the {metric} template "
                f"({template.t} target sets, {template.a} attribute sets)"
            )
    return kept


def cmd_metrics(args) -> int:
    config = _load_config(args.config)
    seed = int(_opt(args, config, "seed", DEFAULT_SEED))
    out_dir = _out_dir(_opt(args, config, "out_dir", "metrics_out"))
    lost_threshold = float(_opt(args, config, "lost_threshold", DEFAULT_LOST_THRESHOLD))
    metrics = list(args.metric or config.get("metrics") or METRIC_NAMES)
    tables = _parse_embedding_specs(args.embedding or config.get("embeddings") or ())
    if not tables:
        raise ValueError("at least one --embedding is required")
    query_paths = list(args.queries or config.get("queries") or ())
    if not query_paths:
        raise ValueError("at least one --queries file is required")
    queries = _check_templates(_load_all_queries(query_paths), metrics, args.skip_invalid)
    hyper = dict(DEFAULT_CLASSIFIER_HYPER)
    hyper["seed"] = seed

    inputs = {f"embedding:{t.name}": p for t, p in zip(tables, _embedding_paths(args, config))}
    inputs.update({f"queries:{i}": path for i, path in enumerate(query_paths)})
    for metric in metrics:
        template = METRIC_TEMPLATES[metric]
        subqueries = expand_subqueries(queries, template)
        matrix = build_score_matrix(
            metric, tables, subqueries, lost_threshold=lost_threshold, hyper=hyper
        )
        payload = {
            "provenance": _provenance(
                inputs, seed, {"metric": metric, "lost_threshold": lost_threshold}
            ),
        }
        payload.update(score_matrix_to_dict(matrix))
        _write_json(payload, out_dir / f"scores_{metric}.json")
        (out_dir / f"scores_{metric}.csv").write_text(
            score_matrix_csv(matrix), encoding="utf-8"
        )
        print(f"{metric}:")
        print(render_score_matrix(matrix), end="")
    return 0


def _embedding_paths(args, config):
    specs = args.embedding or config.get("embeddings") or ()
    paths = []
    for spec in specs:
        if "=" in spec:
            paths.append(spec.partition("=")[2])
        else:
            paths.append(spec)
    return paths


def cmd_rank(args) -> int:
    config = _load_config(args.config)
    seed = int(_opt(args, config, "seed", DEFAULT_SEED))
    out_dir = _out_dir(_opt(args, config, "out_dir", "rank_out"))
    lost_threshold = float(_opt(args, config, "lost_threshold", DEFAULT_LOST_THRESHOLD))
    agg = _opt(args, config, "agg", "abs_mean")
    mode = _opt(args, config, "mode", "ranks")
    metrics = list(args.metric or config.get("metrics") or METRIC_NAMES)
    tables = _parse_embedding_specs(args.embedding or config.get("embeddings") or ())
    if not tables:
        raise ValueError("at least one --embedding is required")
    query_paths = list(args.queries or config.get("queries") or ())
    if not query_paths:
        raise ValueError("at least one --queries file is required")
    queries = _check_templates(_load_all_queries(query_paths), metrics, args.skip_invalid)
    hyper = dict(DEFAULT_CLASSIFIER_HYPER)
    hyper["seed"] = seed

    table = build_rank_table(
        metrics, tables, queries, lost_threshold=lost_threshold, agg=agg, hyper=hyper
    )
    inputs = {f"embedding:{t.name}": p for t, p in zip(tables, _embedding_paths(args, config))}
    inputs.update({f"queries:{i}": path for i, path in enumerate(query_paths)})
    payload = {
        "provenance": _provenance(
            inputs,
            seed,
            {"agg": agg, "mode": mode, "lost_threshold": lost_threshold, "metrics": metrics},
        ),
    }
    payload.update(rank_table_to_dict(table))
    _write_json(payload, out_dir / "rank_table.json")
    (out_dir / "rank_table.csv").write_text(rank_table_csv(table), encoding="utf-8")
    rendered = render_rank_table(table, mode=mode)
    (out_dir / "rank_table.txt").write_text(rendered, encoding="utf-8")
    print(rendered, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biaseval",
        description="Quantify gender bias in word embeddings and machine-translation output.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    eec = subparsers.add_parser(
        "eec", help="generate the gender-neutral source corpus and its seven views"
    )
    eec.add_argument("--occupations", help="occupation lexicon, one entry per line")
    eec.add_argument("--positive", help="positive sentiment lexicon")
    eec.add_argument("--negative", help="negative sentiment lexicon")
    eec.add_argument("--pronouns", help="JSON file overriding the default pronoun specs")
    eec.add_argument("--templates", help="JSON file mapping lexicon category to a template")
    eec.add_argument("--out-dir", dest="out_dir")
    eec.add_argument("--seed", type=int)
    eec.add_argument("--config", help="JSON config file; flags win over file values")
    eec.set_defaults(func=cmd_eec)

    translate = subparsers.add_parser(
        "translate", help="obtain translations from a file or an HTTP backend"
    )
    translate.add_argument("--corpus", help="corpus TSV from the eec command")
    translate.add_argument("--backend", choices=("file", "http"))
    translate.add_argument("--translations", help="pre-translated TSV (file backend)")
    translate.add_argument("--url", help="endpoint URL (http backend)")
    translate.add_argument("--timeout", type=float)
    translate.add_argument("--retries", type=int)
    translate.add_argument("--max-in-flight", dest="max_in_flight", type=int)
    translate.add_argument("--min-coverage", dest="min_coverage", type=float)
    translate.add_argument("--out")
    translate.add_argument("--config")
    translate.set_defaults(func=cmd_translate)

    tgbi = subparsers.add_parser("tgbi", help="score translated output for gender bias")
    tgbi.add_argument("--corpus")
    tgbi.add_argument("--views")
    tgbi.add_argument("--translations")
    tgbi.add_argument("--gender-lexicon", dest="gender_lexicon")
    tgbi.add_argument("--variant", choices=VARIANTS)
    tgbi.add_argument("--ambiguous-policy", dest="ambiguous_policy", choices=AMBIGUOUS_POLICIES)
    tgbi.add_argument("--min-coverage", dest="min_coverage", type=float)
    tgbi.add_argument("--out-dir", dest="out_dir")
    tgbi.add_argument("--seed", type=int)
    tgbi.add_argument("--config")
    tgbi.set_defaults(func=cmd_tgbi)

    metrics = subparsers.add_parser(
        "metrics", help="raw per-(embedding, subquery) metric values"
    )
    rank = subparsers.add_parser(
        "rank", help="aggregate metric scores and rank embeddings"
    )
    for sub in (metrics, rank):
        sub.add_argument(
            "--embedding",
            action="append",
            help="NAME=PATH of a word2vec text file (repeatable)",
        )
        sub.add_argument("--queries", action="append", help="query JSON file (repeatable)")
        sub.add_argument("--metric", action="append", choices=METRIC_NAMES)
        sub.add_argument("--lost-threshold", dest="lost_threshold", type=float)
        sub.add_argument("--seed", type=int)
        sub.add_argument("--out-dir", dest="out_dir")
        sub.add_argument(
            "--skip-invalid",
            action="store_true",
            help="skip queries that do not satisfy a metric's template instead of failing",
        )
        sub.add_argument("--config")
    rank.add_argument("--agg", choices=AGGREGATIONS)
    rank.add_argument("--mode", choices=("ranks", "raw"))
    metrics.set_defaults(func=cmd_metrics)
    rank.set_defaults(func=cmd_rank)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EmbeddingFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BiasEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    raise SystemExit(main())
