"""Deterministic point-set families for experiments."""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError, SizeExceedsSpace
from ..field import Field
from ..geometry import PointSet, read_pointset
from ..rng import XorShift64Star

KINDS = ("random_uniform", "full_space", "nonzero_space", "line_union", "product_set", "file")
RANDOM_KINDS = {"random_uniform", "line_union", "product_set"}

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg}


def size_expr(expr, q: int, d: int) -> int:
    """Evaluate a size such as ``55``, ``q^(5/3)`` or ``q^2-1``; fractional results round up."""
    if isinstance(expr, int):
        return expr
    text = str(expr).replace("^", "**")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"bad size expression {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in ("q", "d"):
            return q if node.id == "q" else d
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ConfigError(f"unsupported token in size expression {expr!r}")

    value = ev(tree)
    # tolerate float noise such as 27.000000000000004 for q^(3/2) at q=9
    n = math.ceil(value - 1e-9)
    if n < 0:
        raise ConfigError(f"size expression {expr!r} is negative")
    return n


@dataclass(frozen=True)
class SetFamily:
    kind: str
    params: dict = field(default_factory=dict, hash=False, compare=True)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown set family {self.kind!r}; choose from {KINDS}")

    @property
    def is_random(self) -> bool:
        return self.kind in RANDOM_KINDS

    def spec(self) -> str:
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


def parse_family(text: str, seed: int = 0) -> SetFamily:
    """``kind[:key=value,...]``; ``file:<path>`` takes the rest of the string as a path."""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind == "file":
        return SetFamily("file", {"path": rest}, seed)
    params = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"family parameter {item!r} is not key=value")
        params[key.strip()] = value.strip()
    return SetFamily(kind, params, seed)


def _index_to_points(idx: np.ndarray, q: int, d: int) -> np.ndarray:
    out = np.empty((len(idx), d), dtype=np.int64)
    rem = np.asarray(idx, dtype=np.int64).copy()
    for col in range(d - 1, -1, -1):
        out[:, col] = rem % q
        rem //= q
    return out


def _sample_indices(rng: XorShift64Star, population: int, n: int) -> list[int]:
    """First ``n`` entries of a seeded Fisher-Yates shuffle of ``range(population)``."""
    pool = list(range(population))
    for i in range(n):
        j = i + rng.below(population - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:n]


def _directions(q: int, d: int) -> np.ndarray:
    """Canonical direction representatives (first nonzero coordinate 1), sorted."""
    pts = _index_to_points(np.arange(1, q ** d, dtype=np.int64), q, d)
    lead = pts[np.arange(len(pts)), (pts != 0).argmax(axis=1)]
    return pts[lead == 1]


def generate_set(family: SetFamily, field: Field, d: int) -> PointSet:
    q = field.q
    space = q ** d
    label = f"{family.spec()}@q={q},d={d},seed={family.seed}"
    kind = family.kind
    if kind == "full_space":
        return PointSet.full_space(field, d, label)
    if kind == "nonzero_space":
        return PointSet.nonzero_space(field, d, label)
    if kind == "file":
        pts = read_pointset(family.params["path"])
        if pts.q != q or pts.dim != d:
            raise ConfigError(f"{family.params['path']}: file is over q={pts.q}, d={pts.dim}")
        return pts
    rng = XorShift64Star(family.seed)
    if kind == "random_uniform":
        n = size_expr(family.params.get("n", 0), q, d)
        if n > space:
            raise SizeExceedsSpace(f"requested {n} points but F_{q}^{d} has {space}")
        idx = _sample_indices(rng, space, n)
        return PointSet(field, d, _index_to_points(np.array(idx, dtype=np.int64), q, d), label)
    if kind == "line_union":
        k = size_expr(family.params.get("lines", 1), q, d)
        dirs = _directions(q, d)
        if k > len(dirs):
            raise SizeExceedsSpace(f"requested {k} lines but F_{q}^{d} has {len(dirs)} directions")
        chosen = dirs[_sample_indices(rng, len(dirs), k)]
        scalars = np.arange(1, q, dtype=np.int64)
        pts = (chosen[:, None, :] * scalars[None, :, None]) % q
        pts = pts.reshape(-1, d)
        if str(family.params.get("origin", "1")) not in ("0", "false", "no"):
            pts = np.vstack([np.zeros((1, d), dtype=np.int64), pts])
        return PointSet(field, d, pts, label)
    if kind == "product_set":
        if "base" in family.params:
            base = sorted({int(v) % q for v in str(family.params["base"]).split("|")})
        else:
            n = size_expr(family.params.get("n", 0), q, d)
            if n > q:
                raise SizeExceedsSpace(f"base set of size {n} exceeds q={q}")
            base = sorted(_sample_indices(rng, q, n))
        grid = np.array(np.meshgrid(*([base] * d), indexing="ij"), dtype=np.int64)
        return PointSet(field, d, grid.reshape(d, -1).T, label)
    raise ConfigError(f"unhandled family {kind!r}")


def resolve_set(text: str, field: Field, d: int, seed: int = 0) -> PointSet:
    """A family spec, or a path to a point-set file if one exists at ``text``."""
    if Path(text).is_file():
        return generate_set(SetFamily("file", {"path": text}, seed), field, d)
    return generate_set(parse_family(text, seed), field, d)
