"""End-to-end pipeline: config loading, stages, artifacts.

Stages run in a fixed order (stats, extract, vectorize, cluster,
evaluate, namespaces); each consumes the corpus plus prior-stage
artifacts only, so a run can resume from any stage using cached files.
With a fixed seed, repeated runs produce byte-identical artifacts.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.sparse as sp

from . import cluster as clustering
from . import decompose, evaluate, idspace, simindex
from .corpus import Corpus, Identifier, StopLists, corpus_stats, default_stop_lists
from .corpus import drop_sparse_documents, load_corpus, load_stop_list
from .errors import ConfigError, StageError
from .extraction import RankerParams, Relation, extract_relations, prepare_corpus
from .namespaces import HierarchyScheme, build_namespace, map_to_hierarchy
from .textproc import Lexicon

STAGES = ("stats", "extract", "vectorize", "cluster", "evaluate", "namespaces")


@dataclass
class PipelineConfig:
    corpus_path: Path
    seed: int
    output_dir: Path
    symbol_stop: Optional[Path] = None
    definition_stop: Optional[Path] = None
    lexicon_path: Optional[Path] = None
    suffix_rules_path: Optional[Path] = None
    labels_path: Optional[Path] = None
    hierarchy_path: Optional[Path] = None
    extraction: dict = field(default_factory=dict)
    association: str = idspace.WEAK
    weighting: str = idspace.TFIDF
    min_df: int = 2
    min_identifier_occurrences: int = 2
    reduction: dict = field(default_factory=lambda: {"kind": "none"})
    clustering: dict = field(default_factory=lambda: {"algorithm": "kmeans", "K": 5})
    purity_threshold: float = 0.8
    min_cluster_size: int = 3
    fuzzy_threshold: float = 0.85
    hierarchy_min_cos: float = 0.2
    hierarchy_min_matches: int = 2
    baseline: Optional[dict] = None

    @classmethod
    def load(cls, path: str | Path, seed: int | None = None, out: str | Path | None = None):
        """Read a JSON config; relative paths resolve against the file."""
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        base = path.parent

        def resolve(key: str, required: bool = False) -> Optional[Path]:
            value = raw.get(key)
            if value is None:
                if required:
                    raise ConfigError(f"config field {key!r} is required")
                return None
            p = (base / value).resolve() if not Path(value).is_absolute() else Path(value)
            if not p.exists():
                raise ConfigError(f"{key} path does not exist: {p}")
            return p

        if seed is None:
            if "seed" not in raw:
                raise ConfigError("config field 'seed' is required for reproducibility")
            seed = int(raw["seed"])
        out_dir = Path(out) if out is not None else base / raw.get("output_dir", "out")
        cfg = cls(
            corpus_path=resolve("corpus", required=True),
            seed=seed,
            output_dir=out_dir,
            symbol_stop=resolve("symbol_stop"),
            definition_stop=resolve("definition_stop"),
            lexicon_path=resolve("lexicon"),
            suffix_rules_path=resolve("suffix_rules"),
            labels_path=resolve("labels"),
            hierarchy_path=resolve("hierarchy"),
            extraction=dict(raw.get("extraction", {})),
            association=raw.get("association", idspace.WEAK),
            weighting=raw.get("weighting", idspace.TFIDF),
            min_df=int(raw.get("min_df", 2)),
            min_identifier_occurrences=int(raw.get("min_identifier_occurrences", 2)),
            reduction=dict(raw.get("reduction", {"kind": "none"})),
            clustering=dict(raw.get("clustering", {"algorithm": "kmeans", "K": 5})),
            purity_threshold=float(raw.get("purity_threshold", 0.8)),
            min_cluster_size=int(raw.get("min_cluster_size", 3)),
            fuzzy_threshold=float(raw.get("fuzzy_threshold", 0.85)),
            hierarchy_min_cos=float(raw.get("hierarchy_min_cos", 0.2)),
            hierarchy_min_matches=int(raw.get("hierarchy_min_matches", 2)),
            baseline=raw.get("baseline"),
        )
        if cfg.association not in idspace.MODES:
            raise ConfigError(f"unknown association mode {cfg.association!r}")
        if cfg.weighting not in idspace.WEIGHTINGS:
            raise ConfigError(f"unknown weighting {cfg.weighting!r}")
        return cfg

    def stop_lists(self) -> StopLists:
        stops = default_stop_lists()
        if self.symbol_stop is not None:
            stops.symbol_stop = load_stop_list(self.symbol_stop)
        if self.definition_stop is not None:
            stops.definition_stop = load_stop_list(self.definition_stop)
        return stops

    def lexicon(self) -> Lexicon:
        if self.lexicon_path is not None or self.suffix_rules_path is not None:
            data = Path(__file__).parent / "data"
            return Lexicon.load(
                self.lexicon_path or data / "lexicon.tsv",
                self.suffix_rules_path or data / "suffix_rules.tsv",
            )
        return Lexicon.default()

    def ranker_params(self) -> RankerParams:
        opts = {k: v for k, v in self.extraction.items() if k != "method"}
        return RankerParams(**opts)

    def extraction_method(self) -> str:
        return self.extraction.get("method", "ranker")


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _load_corpus(config: PipelineConfig) -> Corpus:
    corpus = load_corpus(config.corpus_path, config.stop_lists())
    return drop_sparse_documents(corpus, config.min_identifier_occurrences)


def _labels(config: PipelineConfig, corpus: Corpus) -> dict[str, str]:
    if config.labels_path is not None:
        return evaluate.load_labels(config.labels_path)
    return {doc.doc_id: doc.category for doc in corpus.documents}


def _extract_all(config: PipelineConfig, corpus: Corpus) -> list[Relation]:
    lexicon = config.lexicon()
    stops = config.stop_lists()
    prepared = prepare_corpus(corpus, lexicon)
    relations: list[Relation] = []
    method = config.extraction_method()
    params = config.ranker_params() if method == "ranker" else None
    for doc in prepared:
        relations.extend(
            extract_relations(doc, method, params, stops.definition_stop)
        )
    return relations


def stage_stats(config: PipelineConfig) -> None:
    corpus = _load_corpus(config)
    relations = _extract_all(config, corpus)
    report = corpus_stats(corpus, relations)
    _dump_json(config.output_dir / "stats.json", report.to_dict())


def stage_extract(config: PipelineConfig) -> None:
    corpus = _load_corpus(config)
    relations = _extract_all(config, corpus)
    lines = []
    for rel in sorted(
        relations, key=lambda r: (r.doc_id, r.identifier.key, r.definition)
    ):
        lines.append(
            json.dumps(
                {
                    "doc_id": rel.doc_id,
                    "identifier": rel.identifier.base,
                    "subscript": rel.identifier.subscript,
                    "definition": rel.definition,
                    "score": rel.score,
                    "method": rel.method,
                },
                sort_keys=True,
            )
        )
    (config.output_dir / "relations.jsonl").write_text(
        "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
    )


def _read_relations(config: PipelineConfig) -> list[Relation]:
    path = config.output_dir / "relations.jsonl"
    relations = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        ident = Identifier(
            base=rec["identifier"], subscript=rec.get("subscript"), display=rec["identifier"]
        )
        relations.append(
            Relation(
                identifier=ident,
                definition=rec["definition"],
                score=rec["score"],
                method=rec["method"],
                doc_id=rec["doc_id"],
            )
        )
    return relations


def stage_vectorize(config: PipelineConfig) -> None:
    corpus = _load_corpus(config)
    relations = _read_relations(config)
    vocab = idspace.build_vocabulary(
        relations, corpus, config.association, config.min_df
    )
    dm = idspace.vectorize(corpus, relations, vocab, config.weighting, normalize=True)
    dm.export_matrix_market(config.output_dir / "matrix.mtx")
    _dump_json(
        config.output_dir / "matrix_meta.json",
        {
            "doc_ids": list(dm.doc_ids),
            "dims": list(vocab.dims),
            "df": [int(x) for x in vocab.df],
            "n_docs": vocab.n_docs,
            "mode": vocab.mode,
            "weighting": config.weighting,
            "row_norm": dm.row_norm,
            "empty_docs": list(dm.empty_docs),
        },
    )


def _read_matrix(config: PipelineConfig) -> idspace.DocMatrix:
    meta = json.loads((config.output_dir / "matrix_meta.json").read_text(encoding="utf-8"))
    lines = (config.output_dir / "matrix.mtx").read_text(encoding="utf-8").splitlines()
    m, n, nnz = (int(x) for x in lines[1].split())
    rows, cols, vals = [], [], []
    for line in lines[2 : 2 + nnz]:
        i, j, v = line.split()
        rows.append(int(i) - 1)
        cols.append(int(j) - 1)
        vals.append(float(v))
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(m, n))
    vocab = idspace.Vocabulary(
        dims=tuple(meta["dims"]),
        mode=meta["mode"],
        df=np.array(meta["df"], dtype=np.int64),
        n_docs=meta["n_docs"],
    )
    return idspace.DocMatrix(
        doc_ids=tuple(meta["doc_ids"]),
        vocab=vocab,
        matrix=matrix,
        row_norm=meta["row_norm"],
        empty_docs=tuple(meta["empty_docs"]),
    )


def _grid(config: PipelineConfig) -> list[dict]:
    """Expand list-valued K / k into a list of parameter combos."""
    ks = config.clustering.get("K")
    ranks = config.reduction.get("k")
    k_values = ks if isinstance(ks, list) else [ks]
    rank_values = ranks if isinstance(ranks, list) else [ranks]
    combos = []
    for K, k in itertools.product(k_values, rank_values):
        name_parts = []
        if K is not None:
            name_parts.append(f"K{K}")
        if k is not None:
            name_parts.append(f"k{k}")
        combos.append({"K": K, "k": k, "id": "_".join(name_parts) or "run"})
    return combos


def _embed(config: PipelineConfig, dm: idspace.DocMatrix, rank: Optional[int]):
    kind = config.reduction.get("kind", "none")
    if kind == "none" or rank is None:
        return dm.matrix, None
    if kind == "svd":
        return decompose.lsa_embed(dm.matrix, rank, seed=config.seed), None
    if kind == "nmf":
        factors = decompose.nmf(
            dm.matrix.T,
            rank,
            max_iters=int(config.reduction.get("max_iters", 200)),
            tol=float(config.reduction.get("tol", 1e-4)),
            seed=config.seed,
        )
        return factors.V, factors
    raise ConfigError(f"unknown reduction kind {kind!r}")


def _run_clustering(config: PipelineConfig, X, factors, K: Optional[int]):
    opts = config.clustering
    algorithm = opts.get("algorithm", "kmeans")
    if algorithm == "kmeans":
        return clustering.kmeans(
            X,
            int(K),
            seed=config.seed,
            max_iter=int(opts.get("max_iter", 300)),
            n_restarts=int(opts.get("n_restarts", 1)),
        )
    if algorithm == "minibatch_kmeans":
        n = X.shape[0]
        return clustering.minibatch_kmeans(
            X,
            int(K),
            batch_size=min(int(opts.get("batch_size", 1024)), n),
            iters=int(opts.get("iters", 100)),
            seed=config.seed,
        )
    if algorithm == "agglomerative":
        return clustering.agglomerative(
            X,
            opts.get("linkage", clustering.WARD),
            int(K),
            max_points=int(opts.get("max_points", 1000)),
        )
    if algorithm == "snn_dbscan":
        return clustering.snn_dbscan(
            X,
            K=int(opts.get("neighbors", 10)),
            measure=opts.get("measure", simindex.COSINE),
            eps=int(opts.get("eps", 3)),
            minpts=int(opts.get("minpts", 3)),
            union=bool(opts.get("snn_union", False)),
        )
    if algorithm == "dbscan":
        measure = opts.get("measure", simindex.COSINE)
        eps = float(opts.get("eps", 0.5))
        minpts = int(opts.get("minpts", 3))
        dense = X if isinstance(X, np.ndarray) else np.asarray(sp.csr_matrix(X).todense())

        def region_query(p: int, threshold: float) -> list[int]:
            sims = [
                simindex.similarity(measure, dense[p], dense[q])
                for q in range(dense.shape[0])
            ]
            if measure in simindex.DISTANCE_MEASURES:
                return [q for q, s in enumerate(sims) if s <= threshold]
            return [q for q, s in enumerate(sims) if s >= threshold]

        return clustering.dbscan(region_query, dense.shape[0], eps, minpts)
    if algorithm == "nmf_direct":
        if factors is None:
            raise ConfigError("nmf_direct clustering requires reduction kind 'nmf'")
        return decompose.nmf_assign(factors)
    raise ConfigError(f"unknown clustering algorithm {algorithm!r}")


def _write_assignment(path: Path, doc_ids, labels) -> None:
    lines = [f"{doc_id}\t{int(label)}" for doc_id, label in zip(doc_ids, labels)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def stage_cluster(config: PipelineConfig) -> None:
    dm = _read_matrix(config).drop_empty()
    combos = _grid(config)
    manifest = []
    for combo in combos:
        X, factors = _embed(config, dm, combo["k"])
        assignment = _run_clustering(config, X, factors, combo["K"])
        fname = f"assignment_{combo['id']}.tsv"
        _write_assignment(config.output_dir / fname, dm.doc_ids, assignment.labels)
        manifest.append(
            {
                "id": combo["id"],
                "K": combo["K"],
                "k": combo["k"],
                "file": fname,
                "inertia": assignment.inertia,
                "n_clusters": assignment.n_clusters,
            }
        )
    _dump_json(config.output_dir / "grid.json", {"combos": manifest})


def _read_assignment(path: Path) -> tuple[list[str], np.ndarray]:
    doc_ids, labels = [], []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        doc_id, _, label = line.partition("\t")
        doc_ids.append(doc_id)
        labels.append(int(label))
    return doc_ids, np.array(labels, dtype=int)


def stage_evaluate(config: PipelineConfig) -> None:
    corpus = _load_corpus(config)
    labels = _labels(config, corpus)
    grid = json.loads((config.output_dir / "grid.json").read_text(encoding="utf-8"))
    rows = []
    best = None
    for combo in grid["combos"]:
        doc_ids, assignment_labels = _read_assignment(config.output_dir / combo["file"])
        assignment = clustering.ClusterAssignment(
            labels=assignment_labels, K=int(assignment_labels.max()) + 1
        )
        report = evaluate.purity_report(
            assignment,
            doc_ids,
            labels,
            config.purity_threshold,
            config.min_cluster_size,
        )
        row = {"combo": combo["id"], "K": combo["K"], "k": combo["k"]}
        row.update(report.to_dict())
        rows.append(row)
        key = (report.n_pure, report.overall)
        if best is None or key > best[0]:
            best = (key, combo["id"], combo["file"])
    result = {"rows": rows, "selected": best[1]}
    if config.baseline:
        categories = [labels.get(d, "") for d in doc_ids]
        summary = evaluate.random_baseline(
            len(doc_ids),
            categories,
            cluster_size=int(config.baseline.get("cluster_size", 3)),
            trials=int(config.baseline.get("trials", 200)),
            seed=config.seed,
            purity_threshold=config.purity_threshold,
            min_size=config.min_cluster_size,
        )
        result["baseline"] = summary.to_dict()
    _dump_json(config.output_dir / "purity.json", result)
    selected = (config.output_dir / best[2]).read_text(encoding="utf-8")
    (config.output_dir / "assignment.tsv").write_text(selected, encoding="utf-8")


def stage_namespaces(config: PipelineConfig) -> None:
    corpus = _load_corpus(config)
    labels = _labels(config, corpus)
    titles = {doc.doc_id: doc.title for doc in corpus.documents}
    relations = _read_relations(config)
    doc_ids, assignment_labels = _read_assignment(config.output_dir / "assignment.tsv")
    assignment = clustering.ClusterAssignment(
        labels=assignment_labels, K=int(assignment_labels.max()) + 1
    )
    chosen = evaluate.namespace_defining(
        assignment, doc_ids, labels, config.purity_threshold, config.min_cluster_size
    )
    doc_ids_arr = np.array(doc_ids)
    namespaces = []
    skipped = []
    for cluster_id in chosen:
        members = [str(d) for d in doc_ids_arr[assignment.labels == cluster_id]]
        cluster_relations = [r for r in relations if r.doc_id in set(members)]
        if not cluster_relations:
            skipped.append(cluster_id)
            continue
        namespaces.append(
            build_namespace(
                members,
                relations,
                labels,
                config.fuzzy_threshold,
                cluster_id=cluster_id,
            )
        )
    _dump_json(
        config.output_dir / "namespaces.json",
        {
            "namespaces": [ns.to_dict() for ns in namespaces],
            "skipped_clusters": skipped,
        },
    )
    mapping = []
    if config.hierarchy_path is not None:
        scheme = HierarchyScheme.load(config.hierarchy_path)
        for ns in namespaces:
            hit = map_to_hierarchy(
                ns,
                scheme,
                labels,
                titles,
                min_cos=config.hierarchy_min_cos,
                min_matches=config.hierarchy_min_matches,
            )
            mapping.append(
                {
                    "namespace": ns.name,
                    "cluster_id": ns.cluster_id,
                    "top": hit.top,
                    "second": hit.second,
                    "cosine": hit.cosine,
                    "matched_keywords": hit.matched_keywords,
                }
            )
    _dump_json(
        config.output_dir / "hierarchy_map.json",
        {"scheme": str(config.hierarchy_path) if config.hierarchy_path else None,
         "assignments": mapping},
    )


_STAGE_FUNCS = {
    "stats": stage_stats,
    "extract": stage_extract,
    "vectorize": stage_vectorize,
    "cluster": stage_cluster,
    "evaluate": stage_evaluate,
    "namespaces": stage_namespaces,
}


def run_stage(config: PipelineConfig, stage: str) -> None:
    """Run a single stage, tagging any failure with the stage name."""
    if stage not in _STAGE_FUNCS:
        raise ConfigError(f"unknown stage {stage!r}")
    config.output_dir.mkdir(parents=True, exist_ok=True)
    try:
        _STAGE_FUNCS[stage](config)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, str(exc)) from exc


def run_pipeline(config: PipelineConfig, from_stage: str | None = None) -> None:
    """Run all stages in order, optionally resuming from one of them."""
    start = STAGES.index(from_stage) if from_stage else 0
    for stage in STAGES[start:]:
        run_stage(config, stage)
