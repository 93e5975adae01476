"""File formats: JSON-lines complexes, filtration manifests, chain files,
MatrixMarket operator dumps.

A complex file starts with a header object ``{"n": <int>, "vertex_map":
optional}`` followed by one ``{"s": [v0, ..., vr]}`` object per simplex.
Files are declarations of record, so loading never autocloses; sparse
external vertex ids are remapped to dense ids through the header map.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .complexes import Chain, FiltrationPair, SimplicialComplex, build_complex, validate_filtration
from .errors import BadParameter


def save_complex(k: SimplicialComplex, path) -> None:
    lines = [json.dumps({"n": k.n}, sort_keys=True)]
    for s in k.simplices():
        lines.append(json.dumps({"s": list(s)}))
    Path(path).write_text("\n".join(lines) + "\n")


def load_complex(path) -> SimplicialComplex:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise BadParameter(f"{path}: empty complex file")
    header = json.loads(lines[0])
    if "n" not in header:
        raise BadParameter(f"{path}: header must carry a vertex count 'n'")
    n = int(header["n"])
    vertex_map = {int(kk): int(v) for kk, v in (header.get("vertex_map") or {}).items()}
    simplices = []
    for ln in lines[1:]:
        obj = json.loads(ln)
        verts = [vertex_map.get(v, v) for v in obj["s"]]
        if any(v >= n for v in verts):
            raise BadParameter(f"{path}: vertex id {max(verts)} outside 0..{n - 1}")
        simplices.append(verts)
    return build_complex(simplices, autoclose=False)


def load_filtration(manifest_path) -> FiltrationPair:
    """Manifest ``{"k1": path, "k2": path}`` with paths relative to the manifest."""
    manifest_path = Path(manifest_path)
    obj = json.loads(manifest_path.read_text())
    for key in ("k1", "k2"):
        if key not in obj:
            raise BadParameter(f"{manifest_path}: manifest missing {key!r}")
    base = manifest_path.parent
    k1 = load_complex(base / obj["k1"])
    k2 = load_complex(base / obj["k2"])
    return validate_filtration(k1, k2)


def save_chain(c: Chain, path) -> None:
    coeffs = [[i, c.coeffs[i].numerator, c.coeffs[i].denominator] for i in sorted(c.coeffs)]
    Path(path).write_text(json.dumps({"r": c.r, "coeffs": coeffs}, sort_keys=True) + "\n")


def load_chain(path) -> Chain:
    obj = json.loads(Path(path).read_text())
    if "r" not in obj or "coeffs" not in obj:
        raise BadParameter(f"{path}: chain file needs 'r' and 'coeffs'")
    coeffs = {int(i): Fraction(int(num), int(den)) for i, num, den in obj["coeffs"]}
    return Chain.make(int(obj["r"]), coeffs)


def dump_operator(matrix, path) -> None:
    """MatrixMarket coordinate export for cross-checking with external tools."""
    import scipy.io
    import scipy.sparse as sp

    m = matrix if sp.issparse(matrix) else sp.coo_matrix(matrix)
    scipy.io.mmwrite(str(path), m)
