"""JSON forms of designs, witnesses, groups and certificates.

Everything is exact integers; points are 0-indexed. Designs are written in
canonical block order and canonicalized when read.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .blockset import Design, Permutation, bits_of, mask_of
from .decomposition import DecompositionWitness
from .errors import DesignError
from .pyramidal import PyramidalCertificate


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def read_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DesignError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def write_json(obj: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DesignError(f"{where}: expected an integer, got {value!r}")
    return value


def _point_list(value, v: int, where: str) -> list[int]:
    if not isinstance(value, list):
        raise DesignError(f"{where}: expected a list of point indices")
    pts = []
    for k, p in enumerate(value):
        p = _int(p, f"{where}[{k}]")
        if not 0 <= p < v:
            raise DesignError(f"{where}[{k}]: point index {p} out of range 0..{v - 1}")
        pts.append(p)
    if len(set(pts)) != len(pts):
        raise DesignError(f"{where}: repeated point in {pts}")
    return pts


def design_to_dict(design: Design) -> dict:
    out: dict[str, Any] = {"v": design.v, "blocks": design.block_points()}
    if not design.is_full:
        out["points"] = list(design.point_list)
    return out


def design_from_dict(obj: Any, where: str = "design") -> Design:
    if not isinstance(obj, dict):
        raise DesignError(f"{where}: expected an object with 'v' and 'blocks'")
    for key in ("v", "blocks"):
        if key not in obj:
            raise DesignError(f"{where}: missing field '{key}'")
    v = _int(obj["v"], f"{where}.v")
    if v <= 0:
        raise DesignError(f"{where}.v: must be positive, got {v}")
    if not isinstance(obj["blocks"], list):
        raise DesignError(f"{where}.blocks: expected a list")
    masks = []
    seen: dict[int, int] = {}
    for i, blk in enumerate(obj["blocks"]):
        m = mask_of(_point_list(blk, v, f"{where}.blocks[{i}]"))
        if not m:
            raise DesignError(f"{where}.blocks[{i}]: empty block")
        if m in seen:
            raise DesignError(f"{where}.blocks[{i}]: duplicate of blocks[{seen[m]}]")
        seen[m] = i
        masks.append(m)
    points = None
    if "points" in obj:
        points = _point_list(obj["points"], v, f"{where}.points")
    return Design.from_blocks(v, masks, points)


def load_design(path: str | Path) -> Design:
    return design_from_dict(read_json(path), str(path))


def save_design(design: Design, path: str | Path) -> None:
    write_json(design_to_dict(design), path)


def designs_to_list(designs) -> list[dict]:
    return [design_to_dict(d) for d in designs]


def load_designs(path: str | Path) -> list[Design]:
    data = read_json(path)
    if isinstance(data, dict):
        return [design_from_dict(data, str(path))]
    if not isinstance(data, list):
        raise DesignError(f"{path}: expected a design object or an array of them")
    return [design_from_dict(d, f"{path}[{i}]") for i, d in enumerate(data)]


def witness_to_dict(w: DecompositionWitness) -> dict:
    return {
        "v": w.v,
        "O": list(bits_of(w.O)),
        "Z": list(bits_of(w.Z)),
        "designO": design_to_dict(w.design_o),
        "designZ": design_to_dict(w.design_z),
        "delta": [list(p) for p in w.delta],
    }


def witness_from_dict(obj: Any, where: str = "witness") -> DecompositionWitness:
    if not isinstance(obj, dict):
        raise DesignError(f"{where}: expected an object")
    for key in ("O", "Z", "designO", "designZ", "delta"):
        if key not in obj:
            raise DesignError(f"{where}: missing field '{key}'")
    d_o = design_from_dict(obj["designO"], f"{where}.designO")
    d_z = design_from_dict(obj["designZ"], f"{where}.designZ")
    v = _int(obj.get("v", d_o.v), f"{where}.v")
    o = mask_of(_point_list(obj["O"], v, f"{where}.O"))
    z = mask_of(_point_list(obj["Z"], v, f"{where}.Z"))
    rest = o & ~z
    if rest.bit_count() != 1:
        raise DesignError(f"{where}: O minus Z must be a single point")
    delta = []
    for k, pair in enumerate(obj["delta"]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DesignError(f"{where}.delta[{k}]: expected a pair [i, j]")
        delta.append((_int(pair[0], f"{where}.delta[{k}][0]"), _int(pair[1], f"{where}.delta[{k}][1]")))
    return DecompositionWitness(v, o, z, next(bits_of(rest)), d_o, d_z, tuple(sorted(delta)))


def _perm_from(value, v: int, where: str) -> Permutation:
    images = _point_list(value, v, where)
    if len(images) != v:
        raise DesignError(f"{where}: image array has {len(images)} entries, expected {v}")
    return Permutation(tuple(images))


def group_to_dict(v: int, elements) -> dict:
    return {"v": v, "elements": [list(g.images) for g in elements]}


def group_from_dict(obj: Any, where: str = "group") -> tuple[int, list[Permutation]]:
    if not isinstance(obj, dict) or "v" not in obj or "elements" not in obj:
        raise DesignError(f"{where}: expected an object with 'v' and 'elements'")
    v = _int(obj["v"], f"{where}.v")
    return v, [_perm_from(e, v, f"{where}.elements[{k}]") for k, e in enumerate(obj["elements"])]


def certificate_to_dict(cert: PyramidalCertificate) -> dict:
    out = group_to_dict(cert.v, cert.elements)
    out["fixed"] = list(bits_of(cert.fixed))
    return out


def certificate_from_dict(obj: Any, where: str = "certificate") -> PyramidalCertificate:
    v, elems = group_from_dict(obj, where)
    if "fixed" not in obj:
        raise DesignError(f"{where}: missing field 'fixed'")
    fixed = mask_of(_point_list(obj["fixed"], v, f"{where}.fixed"))
    return PyramidalCertificate.from_elements(v, elems, fixed)


def load_certificate(path: str | Path) -> PyramidalCertificate:
    return certificate_from_dict(read_json(path), str(path))
