"""Concrete length-n schemes: colorings turned into prefix-free encoders,
zero-error verification, decoder tables, rate measurement, and the relay's
own ability to compute the function.

Zero error is demanded only on blocks whose symbol pairs all lie in the
support; decoder tables therefore cover support-consistent inputs only, and
the simulator never draws an off-support pair.
"""
from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .coloring import (
    ColorCover,
    CoverCheck,
    DEFAULT_PAIRWISE_BUDGET,
    support_tuples,
    verify_color_cover,
)
from .entropy import conditional_entropy_of_f
from .errors import AmbiguityError, CapExceededError, InstanceFormatError, VerificationError
from .graphs import f_rook_graph, or_product, product_distribution
from .model import ProblemInstance, marginals, support
from .region import RateTriple

__all__ = [
    "Scheme",
    "DecoderTables",
    "ZeroErrorCheck",
    "RelayCheck",
    "RateMeasurement",
    "huffman_code",
    "is_prefix_free",
    "kraft_sum",
    "expected_code_length",
    "build_scheme",
    "verify_zero_error",
    "build_decoders",
    "measure_rates",
    "relay_computability",
    "load_scheme",
    "store_scheme",
]


def huffman_code(masses: Sequence[Fraction]) -> dict[int, str]:
    """Deterministic binary Huffman code for colors 0..k-1.

    Merges the two lowest-probability nodes, ties broken by the earliest
    color id contained in the node; a single-color alphabet gets "0".
    """
    k = len(masses)
    if k == 0:
        return {}
    if k == 1:
        return {0: "0"}
    heap: list[tuple[Fraction, int, list[int]]] = [
        (m, i, [i]) for i, m in enumerate(masses)
    ]
    heapq.heapify(heap)
    code = {i: "" for i in range(k)}
    while len(heap) > 1:
        m1, i1, l1 = heapq.heappop(heap)
        m2, i2, l2 = heapq.heappop(heap)
        for c in l1:
            code[c] = "0" + code[c]
        for c in l2:
            code[c] = "1" + code[c]
        heapq.heappush(heap, (m1 + m2, min(i1, i2), l1 + l2))
    return code


def is_prefix_free(code: Mapping[int, str]) -> bool:
    words = sorted(code.values())
    return not any(
        b.startswith(a) for a, b in zip(words, words[1:])
    ) and len(set(words)) == len(words)


def kraft_sum(code: Mapping[int, str]) -> Fraction:
    return sum((Fraction(1, 2 ** len(w)) for w in code.values()), Fraction(0))


def expected_code_length(masses: Sequence[Fraction], code: Mapping[int, str]) -> Fraction:
    return sum(
        (m * len(code[c]) for c, m in enumerate(masses)), Fraction(0)
    )


@dataclass(frozen=True)
class Scheme:
    """Length-n encoders: terminal colorings, the relay merge table, and
    prefix-free codeword tables per color."""

    n: int
    enc_a: dict[tuple[int, ...], int]
    enc_b: dict[tuple[int, ...], int]
    theta: dict[tuple[int, int], int]
    code_a: dict[int, str]
    code_b: dict[int, str]
    code_c: dict[int, str]

    def __post_init__(self) -> None:
        for name, code in (("a", self.code_a), ("b", self.code_b), ("c", self.code_c)):
            if not is_prefix_free(code):
                raise VerificationError(f"code_{name} is not prefix free")
            if kraft_sum(code) > 1:
                raise VerificationError(f"code_{name} violates the Kraft inequality")

    def relay_color(self, xt: tuple[int, ...], yt: tuple[int, ...]) -> int:
        return self.theta[(self.enc_a[xt], self.enc_b[yt])]

    def cover(self, inst: ProblemInstance) -> ColorCover:
        """The induced color cover over supported tuples."""
        c_c = {
            cells: self.theta[(self.enc_a[xt], self.enc_b[yt])]
            for cells, xt, yt in support_tuples(inst, self.n)
            if (self.enc_a[xt], self.enc_b[yt]) in self.theta
        }
        return ColorCover(self.n, self.enc_a, self.enc_b, c_c, self.theta)


def _color_masses(
    enc: Mapping[tuple[int, ...], int], dist: Sequence[Fraction], n: int
) -> list[Fraction]:
    size = len(dist)
    k = max(enc.values()) + 1
    masses = [Fraction(0)] * k
    for t in itertools.product(range(size), repeat=n):
        m = Fraction(1)
        for i in t:
            m *= dist[i]
        masses[enc[t]] += m
    return masses


def _relay_masses(inst: ProblemInstance, n: int, enc_a, enc_b, theta) -> list[Fraction]:
    k = max(theta.values()) + 1
    masses = [Fraction(0)] * k
    for cells, xt, yt in support_tuples(inst, n):
        m = Fraction(1)
        for i, j in zip(xt, yt):
            m *= inst.pmf[i][j]
        masses[theta[(enc_a[xt], enc_b[yt])]] += m
    return masses


def build_scheme(
    inst: ProblemInstance,
    n: int,
    c_a: Mapping[tuple[int, ...], int],
    c_b: Mapping[tuple[int, ...], int],
    theta: Mapping[tuple[int, int], int] | None = None,
    c_c: Mapping[tuple[int, ...], int] | None = None,
) -> Scheme:
    """Turn a verified color cover into a scheme with Huffman codewords.

    Accepts either the merge table directly or a relay coloring on supported
    tuples, from which the merge table is derived (it must factor through
    the pair coloring).
    """
    enc_a = {t: c for t, c in c_a.items()}
    enc_b = {t: c for t, c in c_b.items()}
    tuples = support_tuples(inst, n)
    if theta is None:
        if c_c is None:
            raise InstanceFormatError("provide theta or a relay coloring")
        derived: dict[tuple[int, int], int] = {}
        for cells, xt, yt in tuples:
            key = (enc_a[xt], enc_b[yt])
            value = c_c[cells]
            if derived.setdefault(key, value) != value:
                raise VerificationError(
                    f"relay coloring does not factor through the pair colors at {key}"
                )
        theta_map = derived
    else:
        theta_map = dict(theta)

    c_c_map = {
        cells: theta_map[(enc_a[xt], enc_b[yt])]
        for cells, xt, yt in tuples
        if (enc_a[xt], enc_b[yt]) in theta_map
    }
    cover = ColorCover(n, enc_a, enc_b, c_c_map, theta_map)
    check = verify_color_cover(inst, n, cover)
    if not check.ok:
        raise VerificationError(f"invalid color cover: {check.violation}")

    px, py = marginals(inst)
    code_a = huffman_code(_color_masses(enc_a, px, n))
    code_b = huffman_code(_color_masses(enc_b, py, n))
    code_c = huffman_code(_relay_masses(inst, n, enc_a, enc_b, theta_map))
    return Scheme(n, enc_a, enc_b, theta_map, code_a, code_b, code_c)


@dataclass(frozen=True)
class ZeroErrorCheck:
    ok: bool
    violation: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    detail: str = ""


def verify_zero_error(
    inst: ProblemInstance, scheme: Scheme, budget: int = DEFAULT_PAIRWISE_BUDGET
) -> ZeroErrorCheck:
    """Both terminals can decode the whole block iff the composed relay map
    never assigns one color to two adjacent supported tuples; checked
    exhaustively pairwise."""
    base = f_rook_graph(inst)
    product = or_product(base, scheme.n)
    tuples = support_tuples(inst, scheme.n, budget)
    by_color: dict[int, list[tuple[int, ...]]] = {}
    for cells, xt, yt in tuples:
        key = (scheme.enc_a.get(xt), scheme.enc_b.get(yt))
        if key[0] is None or key[1] is None:
            return ZeroErrorCheck(False, None, f"encoder missing a block for {cells}")
        if key not in scheme.theta:
            return ZeroErrorCheck(False, None, f"relay table missing pair {key}")
        by_color.setdefault(scheme.theta[key], []).append(cells)
    for group in by_color.values():
        for u, v in itertools.combinations(group, 2):
            if product.adjacent(u, v):
                return ZeroErrorCheck(False, (u, v), "adjacent tuples share a relay color")
    return ZeroErrorCheck(True)


@dataclass(frozen=True)
class DecoderTables:
    """psi_a: (x-block, relay color) -> function block; psi_b symmetric.

    Entries exist only for reachable support-consistent pairs."""

    psi_a: dict[tuple[tuple[int, ...], int], tuple[str, ...]]
    psi_b: dict[tuple[tuple[int, ...], int], tuple[str, ...]]


def build_decoders(inst: ProblemInstance, scheme: Scheme) -> DecoderTables:
    check = verify_zero_error(inst, scheme)
    if not check.ok:
        raise VerificationError(f"scheme is not zero-error: {check.detail}")
    psi_a: dict = {}
    psi_b: dict = {}
    for cells, xt, yt in support_tuples(inst, scheme.n):
        fv = tuple(inst.f(i, j) for i, j in zip(xt, yt))
        mc = scheme.relay_color(xt, yt)
        for table, key in ((psi_a, (xt, mc)), (psi_b, (yt, mc))):
            if table.setdefault(key, fv) != fv:
                raise AmbiguityError(f"conflicting function blocks for {key}")
    return DecoderTables(psi_a, psi_b)


@dataclass(frozen=True)
class RateMeasurement:
    mode: str  # "exact" | "simulate"
    triple: RateTriple
    stderr: RateTriple | None = None
    exact_fractions: tuple[str, str, str] | None = None
    blocks: int | None = None
    seed: int | None = None


def measure_rates(
    inst: ProblemInstance,
    scheme: Scheme,
    mode: str = "exact",
    blocks: int = 100_000,
    seed: int = 0,
    budget: int = DEFAULT_PAIRWISE_BUDGET,
) -> RateMeasurement:
    """Expected codeword bits per symbol on each link.

    Exact mode sums over the product pmf; simulate mode draws seeded i.i.d.
    support blocks and averages, reporting per-component standard errors.
    """
    n = scheme.n
    if mode == "exact":
        px, py = marginals(inst)
        ra = sum(
            (m * len(scheme.code_a[c]) for c, m in enumerate(_color_masses(scheme.enc_a, px, n))),
            Fraction(0),
        ) / n
        rb = sum(
            (m * len(scheme.code_b[c]) for c, m in enumerate(_color_masses(scheme.enc_b, py, n))),
            Fraction(0),
        ) / n
        rc = sum(
            (
                m * len(scheme.code_c[c])
                for c, m in enumerate(_relay_masses(inst, n, scheme.enc_a, scheme.enc_b, scheme.theta))
            ),
            Fraction(0),
        ) / n
        return RateMeasurement(
            "exact",
            RateTriple(float(ra), float(rb), float(rc)),
            exact_fractions=(str(ra), str(rb), str(rc)),
        )
    if mode != "simulate":
        raise InstanceFormatError(f"unknown rate-measurement mode {mode!r}")

    sup = support(inst).pairs
    probs = np.array([float(inst.pmf[i][j]) for i, j in sup])
    probs /= probs.sum()
    # per-support-block lookup tables, indexed by mixed-radix cell keys
    tuples = support_tuples(inst, n, budget)
    size = len(sup)
    la = np.zeros(size**n, dtype=np.int64)
    lb = np.zeros(size**n, dtype=np.int64)
    lc = np.zeros(size**n, dtype=np.int64)
    for cells, xt, yt in tuples:
        key = 0
        for c in cells:
            key = key * size + c
        la[key] = len(scheme.code_a[scheme.enc_a[xt]])
        lb[key] = len(scheme.code_b[scheme.enc_b[yt]])
        lc[key] = len(scheme.code_c[scheme.relay_color(xt, yt)])
    rng = np.random.default_rng(seed)
    draws = rng.choice(size, size=(blocks, n), p=probs)
    keys = np.zeros(blocks, dtype=np.int64)
    for col in range(n):
        keys = keys * size + draws[:, col]
    samples = [la[keys] / n, lb[keys] / n, lc[keys] / n]
    means = [float(s.mean()) for s in samples]
    errs = [float(s.std(ddof=1) / np.sqrt(blocks)) if blocks > 1 else 0.0 for s in samples]
    return RateMeasurement(
        "simulate",
        RateTriple(*means),
        stderr=RateTriple(*errs),
        blocks=blocks,
        seed=seed,
    )


@dataclass(frozen=True)
class RelayCheck:
    computable: bool
    residual_bits: float
    ambiguous_pairs: tuple[tuple[int, int], ...] = ()


def relay_computability(inst: ProblemInstance, scheme: Scheme) -> RelayCheck:
    """Whether the two incoming messages always pin down the function block.

    Decided symbolically on the support (every reachable message pair must
    be consistent with exactly one function block); the residual conditional
    entropy is reported in bits.
    """
    check = verify_zero_error(inst, scheme)
    if not check.ok:
        raise VerificationError(f"scheme is not zero-error: {check.detail}")
    seen: dict[tuple[int, int], set[tuple[str, ...]]] = {}
    for cells, xt, yt in support_tuples(inst, scheme.n):
        fv = tuple(inst.f(i, j) for i, j in zip(xt, yt))
        seen.setdefault((scheme.enc_a[xt], scheme.enc_b[yt]), set()).add(fv)
    ambiguous = tuple(sorted(k for k, v in seen.items() if len(v) > 1))
    residual = conditional_entropy_of_f(inst, scheme.n, scheme.enc_a, scheme.enc_b)
    return RelayCheck(not ambiguous, residual, ambiguous)


def _blocks_to_indices(
    blocks: Sequence[Any], alphabet: Sequence[str], n: int, what: str
) -> dict[tuple[int, ...], int]:
    index = {s: i for i, s in enumerate(alphabet)}
    out: dict[tuple[int, ...], int] = {}
    for entry in blocks:
        block, color = entry["block"], entry["color"]
        if not isinstance(block, list) or len(block) != n:
            raise InstanceFormatError(f"{what}: block {block!r} must list {n} symbols")
        try:
            key = tuple(index[s] for s in block)
        except KeyError as exc:
            raise InstanceFormatError(f"{what}: unknown symbol {exc.args[0]!r}") from exc
        if not isinstance(color, int) or color < 0:
            raise InstanceFormatError(f"{what}: color must be a nonnegative integer")
        if key in out:
            raise InstanceFormatError(f"{what}: duplicate block {block!r}")
        out[key] = color
    return out


def _check_contiguous(values, what: str) -> None:
    used = set(values)
    if used != set(range(len(used))):
        raise InstanceFormatError(f"{what}: colors must be 0..k-1 with every id used")


def scheme_from_mapping(obj: Any, inst: ProblemInstance) -> Scheme:
    """Decode a scheme document; Huffman codes are filled in when absent."""
    if not isinstance(obj, dict):
        raise InstanceFormatError("scheme document must be a JSON object")
    missing = {"n", "enc_a", "enc_b", "theta"} - set(obj)
    if missing:
        raise InstanceFormatError(f"scheme missing keys: {sorted(missing)}")
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise InstanceFormatError("n must be a positive integer")
    enc_a = _blocks_to_indices(obj["enc_a"], inst.alphabet_x, n, "enc_a")
    enc_b = _blocks_to_indices(obj["enc_b"], inst.alphabet_y, n, "enc_b")
    _check_contiguous(enc_a.values(), "enc_a")
    _check_contiguous(enc_b.values(), "enc_b")
    for t in itertools.product(range(inst.size_x), repeat=n):
        if t not in enc_a:
            raise InstanceFormatError("enc_a must cover every block of symbols")
    for t in itertools.product(range(inst.size_y), repeat=n):
        if t not in enc_b:
            raise InstanceFormatError("enc_b must cover every block of symbols")
    theta: dict[tuple[int, int], int] = {}
    for entry in obj["theta"]:
        pair, color = entry["pair"], entry["color"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise InstanceFormatError("theta entries need a [color_a, color_b] pair")
        theta[(pair[0], pair[1])] = color
    _check_contiguous(theta.values(), "theta")

    codes = obj.get("codes") or {}

    def decode_code(name: str, masses: list[Fraction]) -> dict[int, str]:
        if name in codes:
            table = {e["color"]: e["word"] for e in codes[name]}
            if set(table) != set(range(len(masses))):
                raise InstanceFormatError(f"code_{name} must cover colors 0..{len(masses)-1}")
            return table
        return huffman_code(masses)

    px, py = marginals(inst)
    code_a = decode_code("a", _color_masses(enc_a, px, n))
    code_b = decode_code("b", _color_masses(enc_b, py, n))
    code_c = decode_code("c", _relay_masses(inst, n, enc_a, enc_b, theta))
    return Scheme(n, enc_a, enc_b, theta, code_a, code_b, code_c)


def load_scheme(text: str, inst: ProblemInstance) -> Scheme:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return scheme_from_mapping(obj, inst)


def scheme_to_mapping(scheme: Scheme, inst: ProblemInstance) -> dict[str, Any]:
    def blocks(enc: Mapping[tuple[int, ...], int], alphabet: Sequence[str]) -> list[dict]:
        return [
            {"block": [alphabet[i] for i in t], "color": c}
            for t, c in sorted(enc.items())
        ]

    return {
        "n": scheme.n,
        "enc_a": blocks(scheme.enc_a, inst.alphabet_x),
        "enc_b": blocks(scheme.enc_b, inst.alphabet_y),
        "theta": [
            {"pair": list(pair), "color": c} for pair, c in sorted(scheme.theta.items())
        ],
        "codes": {
            name: [{"color": c, "word": w} for c, w in sorted(code.items())]
            for name, code in (("a", scheme.code_a), ("b", scheme.code_b), ("c", scheme.code_c))
        },
    }


def store_scheme(scheme: Scheme, inst: ProblemInstance) -> str:
    return json.dumps(scheme_to_mapping(scheme, inst), indent=2, sort_keys=True) + "\n"
