"""Generate the bundled toy corpus: 30 synthetic documents, 5 topics.

Each topic has its own identifier vocabulary with known definitions, so
the discovered namespaces can be checked against ground truth.  The
output is deterministic; run this script to regenerate
``demos/data/toy_corpus.jsonl`` byte-identically.
"""

from __future__ import annotations

import json
from pathlib import Path

TOPICS = {
    "Classical mechanics": {
        "identifiers": [
            ("F", "force", r"\vec F = m \vec a"),
            ("m", "mass", "p = m v"),
            ("a", "acceleration", "a = F / m"),
            ("v", "velocity", "v = a t"),
            ("p", "momentum", "p = m v"),
            ("t", "time", "x = v t"),
        ],
        "titles": [
            "Newton's second law of motion",
            "Uniform acceleration",
            "Conservation of momentum",
            "Projectile motion",
            "Friction on an inclined plane",
            "Circular motion and velocity",
        ],
    },
    "Probability theory": {
        "identifiers": [
            ("mu", "mean", r"\mu = E(X)"),
            ("sigma", "variance", r"\sigma^2 = E((X - \mu)^2)"),
            ("X", "random variable", r"X \sim P"),
            ("n", "sample size", r"\bar x = s / n"),
            ("s", "sample sum", r"s = x_1 + x_2"),
            ("f", "density", r"f(x) \geq 0"),
        ],
        "titles": [
            "Expected value of a random variable",
            "Variance and standard deviation",
            "Law of large numbers",
            "Normal distribution",
            "Sampling from a population",
            "Moment generating functions",
        ],
    },
    "Linear algebra": {
        "identifiers": [
            ("A", "matrix", r"A x = \lambda x"),
            ("lambda", "eigenvalue", r"\det(A - \lambda I) = 0"),
            ("x", "eigenvector", r"A x = \lambda x"),
            ("I", "identity matrix", r"A I = A"),
            ("r", "rank", r"r \leq n"),
            ("b", "right hand side", r"A x = b"),
        ],
        "titles": [
            "Eigenvalues and eigenvectors",
            "Matrix diagonalization",
            "Solving linear systems",
            "Rank of a matrix",
            "Characteristic polynomials",
            "Spectral decomposition",
        ],
    },
    "Graph theory": {
        "identifiers": [
            ("G", "graph", r"G = (V, E)"),
            ("V", "vertex set", r"|V| = n"),
            ("E", "edge set", r"|E| = m"),
            ("d", "degree", r"d(u) \geq 0"),
            ("u", "vertex", r"u \in V"),
            ("w", "edge weight", r"w(u, v) > 0"),
        ],
        "titles": [
            "Graphs and adjacency",
            "Vertex degrees and handshaking",
            "Shortest paths in weighted graphs",
            "Connected components",
            "Trees and spanning subgraphs",
            "Graph coloring",
        ],
    },
    "Thermodynamics": {
        "identifiers": [
            ("T", "temperature", r"P V = n R T"),
            ("S", "entropy", r"\Delta S \geq 0"),
            ("Q", "heat", r"\Delta U = Q - W"),
            ("W", "work", r"W = P \Delta V"),
            ("P", "pressure", r"P V = n R T"),
            ("U", "internal energy", r"\Delta U = Q - W"),
        ],
        "titles": [
            "The first law of thermodynamics",
            "Entropy and the second law",
            "Ideal gas processes",
            "Heat engines and efficiency",
            "Isothermal expansion",
            "Thermodynamic equilibrium",
        ],
    },
}

SENTENCE = "In this formula ${tex}$, the symbol ${sym}$ is the {definition}."
OPENER = "This article studies {title_lower}."


def make_documents() -> list[dict]:
    docs = []
    doc_no = 0
    for category, spec in TOPICS.items():
        idents = spec["identifiers"]
        for d, title in enumerate(spec["titles"]):
            # rotate through the topic vocabulary: four identifiers per doc
            chosen = [idents[(d + j) % len(idents)] for j in range(4)]
            parts = [OPENER.format(title_lower=title.lower())]
            for sym, definition, tex in chosen:
                sym_tex = "\\" + sym if len(sym) > 1 else sym
                parts.append(
                    SENTENCE.format(tex=tex, sym=sym_tex, definition=definition)
                )
            doc_no += 1
            docs.append(
                {
                    "doc_id": f"doc{doc_no:02d}",
                    "title": title,
                    "category": category,
                    "text": " ".join(parts),
                }
            )
    return docs


def main() -> None:
    out = Path(__file__).parent / "data" / "toy_corpus.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(doc, sort_keys=True) for doc in make_documents()]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} documents to {out}")


if __name__ == "__main__":
    main()
