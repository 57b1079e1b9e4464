"""Command-line wiring: ingestion, filtering, extraction, classification,
evaluation, and the full pipeline as one entry point.

Exit codes: 0 success, 1 validation error (bad flags, missing files,
schema violations), 2 runtime error.  With the hash or file providers
every subcommand is byte-for-byte reproducible and touches no network.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .aspects import (
    UNCLASSIFIED,
    AspectStrategy,
    classify_corpus,
)
from .client import ClassifierClient
from .errors import (
    ArgumentError,
    ConfigError,
    FinsiftError,
    SourceError,
    ValidationError,
)
from .evaluate import confusion, metrics, render_csv, render_table
from .fusion import (
    PipelineConfig,
    extract_keywords_en,
    extract_keywords_si,
    keywords_to_json_dict,
)
from .ingest import IngestConfig, file_source, ingest, read_comments, write_comments
from .lexicon import Lexicon, combined_lexicon, load_lexicon
from .linear import LinearModel, load_model
from .model import AspectLabel, Comment, Script
from .providers import (
    EmbeddingProvider,
    file_provider,
    hash_provider,
    remote_provider,
)
from .relevance import FilterStrategy, filter_corpus
from .textnorm import build_document

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

SI_ROUTE_THRESHOLD = 0.3

_LETTER_SCRIPTS = frozenset({Script.SINHALA, Script.LATIN, Script.MIXED})
_SINHALA_SCRIPTS = frozenset({Script.SINHALA, Script.MIXED})


class _Parser(argparse.ArgumentParser):
    """Raises on usage errors instead of exiting, so main() owns exit codes."""

    def error(self, message):
        raise ArgumentError(message)


def load_config_file(path) -> dict[str, str]:
    """One flat ``key = value`` per line, '#' comments; keys mirror flag names."""
    mapping: dict[str, str] = {}
    for line_no, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{path} line {line_no}: expected key = value")
        mapping[key.strip()] = value.strip()
    return mapping


class _Settings:
    """Flag values layered over config-file values over defaults."""

    def __init__(self, args: argparse.Namespace):
        self._flags = vars(args)
        config_path = self._flags.get("config")
        self._file = load_config_file(config_path) if config_path else {}

    def get(self, key: str, default=None, cast=None):
        value = self._flags.get(key.replace("-", "_"))
        if value is None:
            value = self._file.get(key)
            if value is None:
                return default
        if cast is not None and isinstance(value, str):
            try:
                value = cast(value)
            except ValueError as exc:
                raise ConfigError(f"bad value for --{key}: {exc}") from exc
        return value

    def path(self, key: str, required: bool = False) -> Optional[Path]:
        value = self.get(key)
        if value is None:
            if required:
                raise ConfigError(f"--{key} is required")
            return None
        path = Path(value)
        if not path.exists():
            raise ConfigError(f"--{key}: no such file: {path}")
        return path

    def out_path(self, key: str = "out", required: bool = False) -> Optional[Path]:
        value = self.get(key)
        if value is None:
            if required:
                raise ConfigError(f"--{key} is required")
            return None
        return Path(value)


@dataclass(frozen=True)
class RunConfig:
    """Everything a stage needs, resolved and validated up front."""

    lexicon: Lexicon
    provider_spec: str = "hash"
    vectors: Optional[Path] = None
    endpoint: Optional[str] = None
    model_path: Optional[Path] = None
    strategy_filter: str = "lexicon"
    strategy_aspect: str = "lexicon"
    lang: str = "auto"
    si_threshold: float = SI_ROUTE_THRESHOLD
    top_k: int = 10
    jobs: int = 1
    min_hits: int = 1
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    def __post_init__(self):
        if self.lang not in ("auto", "en", "si", "mixed"):
            raise ConfigError("--lang must be auto, en, si, or mixed")
        if not 0.0 <= self.si_threshold <= 1.0:
            raise ConfigError("--si-threshold must be within [0, 1]")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        if self.min_hits < 1:
            raise ConfigError("--min-hits must be >= 1")

    def provider(self) -> EmbeddingProvider:
        parts = self.provider_spec.split(":")
        kind = parts[0]
        try:
            if kind == "hash":
                dims = int(parts[1]) if len(parts) > 1 else 64
                seed = int(parts[2]) if len(parts) > 2 else 0
                return hash_provider(dims, seed)
        except ValueError as exc:
            raise ConfigError(f"bad provider spec {self.provider_spec!r}") from exc
        if kind == "file":
            if self.vectors is None:
                raise ConfigError("--vectors is required with --provider file")
            return file_provider(self.vectors)
        if kind == "remote":
            if not self.endpoint:
                raise ConfigError("--endpoint is required with --provider remote")
            return remote_provider(self.endpoint)
        raise ConfigError(
            f"unknown provider {self.provider_spec!r}; "
            "expected hash[:dims[:seed]], file, or remote"
        )

    def model(self, provider: EmbeddingProvider) -> Optional[LinearModel]:
        if self.model_path is None:
            return None
        return load_model(self.model_path, expect_provider=provider.id())

    def client(self) -> ClassifierClient:
        if not self.endpoint:
            raise ConfigError("--endpoint is required for the external strategy")
        return ClassifierClient(self.endpoint)


def _build_lexicon(settings: _Settings) -> Lexicon:
    en_path = settings.path("lexicon-en")
    si_path = settings.path("lexicon-si")
    if en_path is None and si_path is None:
        return combined_lexicon()
    entries = []
    for path in (en_path, si_path):
        if path is not None:
            entries.extend(load_lexicon(path).entries)
    return Lexicon(entries)


def run_config(settings: _Settings) -> RunConfig:
    return RunConfig(
        lexicon=_build_lexicon(settings),
        provider_spec=settings.get("provider", "hash"),
        vectors=settings.path("vectors"),
        endpoint=settings.get("endpoint"),
        model_path=settings.path("model"),
        strategy_filter=settings.get("strategy-filter", "lexicon"),
        strategy_aspect=settings.get("strategy-aspect", "lexicon"),
        lang=settings.get("lang", "auto"),
        si_threshold=settings.get("si-threshold", SI_ROUTE_THRESHOLD, cast=float),
        top_k=settings.get("top-k", 10, cast=int),
        jobs=settings.get("jobs", 1, cast=int),
        min_hits=settings.get("min-hits", 1, cast=int),
        pipeline=PipelineConfig(top_k=settings.get("top-k", 10, cast=int)),
    )


def sinhala_ratio(text: str) -> float:
    """Fraction of letter-bearing tokens written in Sinhala or mixed script."""
    doc = build_document(text)
    letters = [t for t in doc.tokens if t.script in _LETTER_SCRIPTS]
    if not letters:
        return 0.0
    sinhala = sum(1 for t in letters if t.script in _SINHALA_SCRIPTS)
    return sinhala / len(letters)


def route_language(text: str, lang: str, threshold: float = SI_ROUTE_THRESHOLD) -> str:
    """'auto' routes by script share; anything else is forced."""
    if lang != "auto":
        return lang
    return "si" if sinhala_ratio(text) > threshold else "en"


def _pmap(fn, items: Sequence, jobs: int) -> list:
    """Order-preserving map, optionally across a thread pool."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _write_jsonl(path: Path, rows: Sequence[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")


def _extract_one(comment: Comment, config: RunConfig, provider, lexicon) -> dict:
    lang = route_language(comment.text, config.lang, config.si_threshold)
    doc = build_document(comment.text, comment.id)
    if lang == "en":
        results = extract_keywords_en(doc, provider, lexicon, config.pipeline)
    else:
        # Auto-routed docs may be code-mixed, so match vocabulary across both
        # languages; matching is exact, so pure Sinhala text is unaffected.
        language = "si" if config.lang == "si" else "mixed"
        results = extract_keywords_si(
            doc, provider, lexicon, config.pipeline, language=language
        )
    row = keywords_to_json_dict(comment.id, results)
    row["lang"] = lang
    return row


def _filter_strategy(name: str) -> FilterStrategy:
    try:
        return FilterStrategy(name)
    except ValueError:
        valid = ", ".join(s.value for s in FilterStrategy)
        raise ConfigError(f"unknown filter strategy {name!r}; expected one of {valid}")


def _aspect_chain(spec: str) -> list[AspectStrategy]:
    chain = []
    for name in spec.split(","):
        name = name.strip()
        try:
            chain.append(AspectStrategy(name))
        except ValueError:
            raise ConfigError(
                f"unknown aspect strategy {name!r}; "
                "expected lexicon, linear, or external"
            )
    if AspectStrategy.CENTROID in chain:
        raise ConfigError(
            "the centroid strategy needs in-process centroids; "
            "use lexicon, linear, or external here"
        )
    return chain


def _run_filter(comments, config: RunConfig, quarantine: Optional[Path]):
    strategy = _filter_strategy(config.strategy_filter)
    provider = model = client = None
    if strategy is FilterStrategy.LINEAR:
        provider = config.provider()
        model = config.model(provider)
        if model is None:
            raise ConfigError("--model is required with the linear filter strategy")
    elif strategy is FilterStrategy.EXTERNAL:
        client = config.client()
    return filter_corpus(
        comments,
        strategy,
        lexicon=config.lexicon,
        provider=provider,
        model=model,
        client=client,
        min_hits=config.min_hits,
        quarantine_path=quarantine,
    )


def _run_classify(comments, config: RunConfig):
    chain = _aspect_chain(config.strategy_aspect)
    provider = model = client = None
    if AspectStrategy.LINEAR in chain:
        provider = config.provider()
        model = config.model(provider)
        if model is None:
            raise ConfigError("--model is required with the linear aspect strategy")
    if AspectStrategy.EXTERNAL in chain:
        client = config.client()
    return classify_corpus(
        comments,
        chain,
        lexicon=config.lexicon,
        provider=provider,
        model=model,
        client=client,
    )


def _aspect_tally(outcomes) -> dict[str, int]:
    tally = {label.value: 0 for label in AspectLabel}
    tally[UNCLASSIFIED] = 0
    for outcome in outcomes:
        if outcome.unclassified:
            tally[UNCLASSIFIED] += 1
        else:
            tally[outcome.decision.label.value] += 1
    return {name: count for name, count in tally.items() if count}


def cmd_ingest(settings: _Settings, args) -> int:
    query = settings.get("query")
    if not query:
        raise ConfigError("--query is required")
    pages = settings.path("pages", required=True)
    out = settings.out_path(required=True)
    max_pages = settings.get("max-pages", cast=int)
    source = file_source(pages)
    _, report = ingest(
        source, query, IngestConfig(max_pages=max_pages, out_path=out)
    )
    print(
        f"fetched {report.fetched}  duplicates_removed {report.duplicates_removed}  "
        f"empty_removed {report.empty_removed}  persisted {report.persisted}"
    )
    for message in report.source_errors:
        print(f"source error: {message}", file=sys.stderr)
    return EXIT_OK


def cmd_filter(settings: _Settings, args) -> int:
    config = run_config(settings)
    corpus = settings.path("corpus", required=True)
    out = settings.out_path(required=True)
    quarantine = settings.out_path("quarantine")
    comments = read_comments(corpus)
    kept, report = _run_filter(comments, config, quarantine)
    write_comments(out, kept)
    print(f"kept {report.kept}  removed {report.removed}  total {report.total}")
    return EXIT_OK


def cmd_extract(settings: _Settings, args) -> int:
    config = run_config(settings)
    text = settings.get("text")
    corpus_path = None if text else settings.path("corpus", required=True)
    provider = config.provider()
    if text:
        row = _extract_one(Comment("adhoc", "cli", text), config, provider, config.lexicon)
        for kw in row["keywords"]:
            print(f"{kw['phrase']}\t{kw['final_score']:.4f}")
        return EXIT_OK
    out = settings.out_path(required=True)
    comments = read_comments(corpus_path)
    rows = _pmap(
        lambda c: _extract_one(c, config, provider, config.lexicon),
        comments,
        config.jobs,
    )
    _write_jsonl(out, rows)
    print(f"extracted keywords for {len(rows)} comments -> {out}")
    return EXIT_OK


def cmd_classify(settings: _Settings, args) -> int:
    config = run_config(settings)
    corpus = settings.path("corpus", required=True)
    out = settings.out_path(required=True)
    comments = read_comments(corpus)
    outcomes = _run_classify(comments, config)
    _write_jsonl(out, [o.to_json_dict() for o in outcomes])
    for name, count in _aspect_tally(outcomes).items():
        print(f"{name}: {count}")
    return EXIT_OK


def _read_labels(path: Path, task: str) -> dict[str, str]:
    labels = {}
    for line_no, line in enumerate(
        path.read_text(encoding="utf-8").splitlines(), 1
    ):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            labels[str(row["id"])] = str(row[task])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise SourceError(f"{path} line {line_no}: {exc}") from exc
    return labels


def cmd_eval(settings: _Settings, args) -> int:
    task = settings.get("task")
    if task not in ("aspect", "relevance"):
        raise ConfigError("--task must be aspect or relevance")
    gold = _read_labels(settings.path("gold", required=True), task)
    pred = _read_labels(settings.path("pred", required=True), task)
    if not gold:
        raise ConfigError("gold file holds no rows")
    missing = sorted(set(gold) - set(pred))
    if missing:
        raise ConfigError(f"predictions missing for ids: {', '.join(missing[:5])}")
    ids = sorted(gold)
    cm = confusion([gold[i] for i in ids], [pred[i] for i in ids])
    report = metrics(cm)
    print(render_table([(task, report)]))
    out = settings.out_path()
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(render_csv([(task, report)]), encoding="utf-8")
    return EXIT_OK


def cmd_pipeline(settings: _Settings, args) -> int:
    config = run_config(settings)
    out_dir = settings.out_path(required=True)
    out_dir.mkdir(parents=True, exist_ok=True)

    pages = settings.path("pages")
    if pages is not None:
        query = settings.get("query") or "corpus"
        comments, _ = ingest(
            file_source(pages),
            query,
            IngestConfig(
                max_pages=settings.get("max-pages", cast=int),
                out_path=out_dir / "corpus.jsonl",
            ),
        )
    else:
        comments = read_comments(settings.path("corpus", required=True))

    kept, freport = _run_filter(comments, config, out_dir / "quarantine.jsonl")
    write_comments(out_dir / "kept.jsonl", kept)

    provider = config.provider()
    rows = _pmap(
        lambda c: _extract_one(c, config, provider, config.lexicon),
        kept,
        config.jobs,
    )
    _write_jsonl(out_dir / "keywords.jsonl", rows)

    outcomes = _run_classify(kept, config)
    _write_jsonl(out_dir / "aspects.jsonl", [o.to_json_dict() for o in outcomes])

    report = {
        "total": freport.total,
        "kept": freport.kept,
        "removed": freport.removed,
        "keywords_total": sum(len(r["keywords"]) for r in rows),
        "aspects": _aspect_tally(outcomes),
    }
    (out_dir / "report.json").write_text(
        json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"kept {freport.kept}  removed {freport.removed}  total {freport.total}")
    for name, count in report["aspects"].items():
        print(f"{name}: {count}")
    print(f"wrote kept.jsonl keywords.jsonl aspects.jsonl report.json -> {out_dir}")
    return EXIT_OK


def _add_shared(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value file; flags override")
    parser.add_argument("--lexicon-en")
    parser.add_argument("--lexicon-si")
    parser.add_argument("--vectors")
    parser.add_argument("--provider", help="hash[:dims[:seed]], file, or remote")
    parser.add_argument("--endpoint")
    parser.add_argument("--model")
    parser.add_argument("--strategy-filter")
    parser.add_argument("--strategy-aspect")
    parser.add_argument("--lang", help="auto, en, si, or mixed")
    parser.add_argument("--si-threshold")
    parser.add_argument("--top-k")
    parser.add_argument("--jobs")
    parser.add_argument("--min-hits")
    parser.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finsift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="fetch, clean, and deduplicate comments")
    p.add_argument("--query")
    p.add_argument("--pages", help="JSON-lines page file to read from")
    p.add_argument("--max-pages")
    _add_shared(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("filter", help="drop irrelevant comments")
    p.add_argument("--corpus")
    p.add_argument("--quarantine")
    _add_shared(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("extract", help="rank keywords per comment")
    p.add_argument("--corpus")
    p.add_argument("--text", help="extract from one string instead of a corpus")
    _add_shared(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("classify", help="assign banking aspects")
    p.add_argument("--corpus")
    _add_shared(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", help="score predictions against gold labels")
    p.add_argument("--gold")
    p.add_argument("--pred")
    p.add_argument("--task", help="aspect or relevance")
    _add_shared(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="filter, extract, and classify in one run")
    p.add_argument("--corpus")
    p.add_argument("--pages")
    p.add_argument("--query")
    p.add_argument("--max-pages")
    _add_shared(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = _Settings(args)
        return args.func(settings, args)
    except (ArgumentError, ConfigError, ValidationError, SourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FinsiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
