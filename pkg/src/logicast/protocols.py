"""Wire protocols for shipping algebraic sets between two parties.

Five scenarios share one envelope.  A transmission is a 24 byte header
(magic, scenario tag, codec id, universe size m, seed, four quantized
law parameters) followed by a self-delimiting payload bit stream:

* t1: the whole zero set, sent as size plus combinatorial rank.
* t2: the zero set ranked inside the background's zero set, which both
  parties can enumerate.
* t3: the same bits as t2; the decoder additionally strips everything
  the background already proves and hands back only the increment.
* t4: a partition codeword for the ternary vector psi(s, q), letting
  the reconstruction land anywhere between Z(s) and Z(q).
* t5: psi(s, q) split along the background's zero set, each part coded
  with its own codebook so conditional densities can differ.

Payloads are decodable from the header plus whatever the decoder is
assumed to know already (the background r for t2, t3, t5).  Nothing in
the stream is byte-padded except the tail of each payload, so
transmissions concatenate cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algset import M_MAX, AlgSet, entails, reconstruct, zeros
from .bitcodec import (
    BitReader,
    BitWriter,
    elias_delta_encode,
    rank_width,
    subset_rank,
    subset_unrank,
)
from .errors import (
    DomainError,
    MalformedCodeword,
    MalformedHeader,
    NotEntailed,
)
from .groebner import delta
from .partition import (
    SharedRandomness,
    TernaryVector,
    linear_decode,
    linear_encode,
    random_decode,
    random_encode,
)
from .poly import PolySet
from .randomness import MASK64, derive_seed

MAGIC = b"LGC1"
HEADER_BYTES = 24

_TAG_OF = {"t1": 1, "t2": 2, "t3": 3, "t4": 4, "t5": 5}
_NAME_OF = {v: k for k, v in _TAG_OF.items()}
_CODEC_ID = {None: 0, "random": 1, "linear": 2}
_CODEC_NAME = {v: k for k, v in _CODEC_ID.items()}

# Law parameters ride in the header as 16-bit fixed point, value/65536.
PARAM_SCALE = 65536


def quantize_param(p: float) -> int:
    if p < 0.0 or p > 1.0:
        raise DomainError(f"law parameter out of range: {p}")
    return min(PARAM_SCALE - 1, round(p * PARAM_SCALE))


@dataclass(frozen=True)
class Transmission:
    scenario: str
    m: int
    codec: str | None
    seed: int
    params: tuple[int, int, int, int]
    payload: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.scenario not in _TAG_OF:
            raise DomainError(f"unknown scenario {self.scenario!r}")
        if self.codec not in _CODEC_ID:
            raise DomainError(f"unknown codec {self.codec!r}")
        if (self.codec is None) != (self.scenario in ("t1", "t2", "t3")):
            raise DomainError("codec choice and scenario disagree")
        if not 1 <= self.m <= M_MAX:
            raise DomainError(f"universe size {self.m} unsupported")
        if not 0 <= self.seed <= MASK64:
            raise DomainError("seed must fit in 64 bits")
        if len(self.params) != 4 or any(
            not 0 <= p < PARAM_SCALE for p in self.params
        ):
            raise DomainError("law parameters must be four 16-bit values")

    def to_bytes(self) -> bytes:
        head = bytearray(MAGIC)
        head.append(_TAG_OF[self.scenario])
        head.append(_CODEC_ID[self.codec])
        head += self.m.to_bytes(2, "big")
        head += self.seed.to_bytes(8, "big")
        for p in self.params:
            head += p.to_bytes(2, "big")
        body = BitWriter()
        for bit in self.payload:
            body.write_bit(bit)
        return bytes(head) + body.to_bytes()


def _payload_reader(tx: Transmission) -> BitReader:
    body = BitWriter()
    for bit in tx.payload:
        body.write_bit(bit)
    return BitReader(body.to_bytes())


# --------------------------------------------------------------------------
# the ternary source


def psi(s: PolySet, q: PolySet) -> TernaryVector:
    """Ternary vector with 0 on Z(s), 1 outside Z(q), free between.

    Well defined because entailment makes Z(s) and the complement of
    Z(q) disjoint.
    """
    if s.m != q.m:
        raise DomainError(f"universe mismatch: {s.m} vs {q.m}")
    if not entails(s, q):
        raise NotEntailed("statements do not entail the query")
    vals = np.full(1 << s.m, 2, dtype=np.int8)
    vals[~zeros(q).to_bool_array()] = 1
    vals[zeros(s).to_bool_array()] = 0
    return TernaryVector(vals)


def _empirical_pair(entries: np.ndarray) -> tuple[float, float]:
    # densities of the zero side and of the query's zero set, read off
    # the vector itself so encoder defaults need no law input
    ln = entries.size
    z = int(np.count_nonzero(entries == 0))
    o = int(np.count_nonzero(entries == 1))
    return z / ln, (ln - o) / ln


# --------------------------------------------------------------------------
# t1: blank-slate receiver


def t1_encode(s: PolySet, seed: int = 0, p_s: float | None = None) -> Transmission:
    zs = zeros(s)
    n = 1 << s.m
    bits = elias_delta_encode(zs.size + 1)
    rank = subset_rank(n, zs.points_list())
    width = rank_width(n, zs.size)
    bits.extend((rank >> sh) & 1 for sh in range(width - 1, -1, -1))
    dens = p_s if p_s is not None else zs.size / n
    return Transmission(
        "t1", s.m, None, seed, (quantize_param(dens), 0, 0, 0), tuple(bits)
    )


def t1_decode(tx: Transmission) -> PolySet:
    if tx.scenario != "t1":
        raise DomainError(f"expected a t1 transmission, got {tx.scenario}")
    n = 1 << tx.m
    reader = _payload_reader(tx)
    k = reader.read_elias_delta() - 1
    if k > n:
        raise MalformedCodeword(f"zero set size {k} exceeds universe {n}")
    members = subset_unrank(n, k, reader.read_bits(rank_width(n, k)))
    return reconstruct(AlgSet.from_points(tx.m, members))


# --------------------------------------------------------------------------
# t2/t3: receiver holding entailed background


def t2_encode(
    s: PolySet,
    r: PolySet,
    seed: int = 0,
    p_s: float | None = None,
    p_r: float | None = None,
) -> Transmission:
    """Rank Z(s) within the shared enumeration of Z(r)."""
    return _ranked_within(s, r, "t2", seed, p_s, p_r)


def t3_encode(
    s: PolySet,
    r: PolySet,
    seed: int = 0,
    p_s: float | None = None,
    p_r: float | None = None,
) -> Transmission:
    # the encoder is t2's; only the tag tells the decoder to diff
    return _ranked_within(s, r, "t3", seed, p_s, p_r)


def _ranked_within(
    s: PolySet,
    r: PolySet,
    scenario: str,
    seed: int,
    p_s: float | None,
    p_r: float | None,
) -> Transmission:
    if s.m != r.m:
        raise DomainError(f"universe mismatch: {s.m} vs {r.m}")
    if not entails(s, r):
        raise NotEntailed("statements do not entail the background")
    zs, zr = zeros(s), zeros(r)
    position = {pt: i for i, pt in enumerate(zr.points_list())}
    members = [position[pt] for pt in zs.points_list()]
    bits = elias_delta_encode(zs.size + 1)
    rank = subset_rank(zr.size, members)
    width = rank_width(zr.size, zs.size)
    bits.extend((rank >> sh) & 1 for sh in range(width - 1, -1, -1))
    n = 1 << s.m
    dens_s = p_s if p_s is not None else zs.size / n
    dens_r = p_r if p_r is not None else zr.size / n
    return Transmission(
        scenario,
        s.m,
        None,
        seed,
        (quantize_param(dens_s), quantize_param(dens_r), 0, 0),
        tuple(bits),
    )


def t2_decode(tx: Transmission, r: PolySet) -> PolySet:
    if tx.scenario not in ("t2", "t3"):
        raise DomainError(f"expected a t2/t3 transmission, got {tx.scenario}")
    if r.m != tx.m:
        raise DomainError(f"background universe {r.m} does not match header {tx.m}")
    points = zeros(r).points_list()
    reader = _payload_reader(tx)
    k = reader.read_elias_delta() - 1
    if k > len(points):
        raise MalformedCodeword(f"zero set size {k} exceeds background {len(points)}")
    members = subset_unrank(len(points), k, reader.read_bits(rank_width(len(points), k)))
    return reconstruct(AlgSet.from_points(tx.m, [points[i] for i in members]))


def t3_decode(tx: Transmission, r: PolySet) -> PolySet:
    """Decode, then keep only what the background does not already prove."""
    return delta(t2_decode(tx, r), r)


# --------------------------------------------------------------------------
# t4/t5: goal-directed coding through the partition device


def _side_shared(seed: int, q_zero: int, q_query: int) -> SharedRandomness:
    # q_query < PARAM_SCALE always, so the one-density never quantizes
    # to zero and the fraction below is well defined
    q_one = PARAM_SCALE - q_query
    return SharedRandomness(seed, Fraction(q_zero, q_zero + q_one))


def _encode_partition(
    x: TernaryVector, codec: str, seed: int, q_zero: int, q_query: int
) -> list[int]:
    shared = _side_shared(seed, q_zero, q_query)
    if codec == "linear":
        return linear_encode(x, shared)
    if codec != "random":
        raise DomainError(f"unknown codec {codec!r}")
    if q_zero == 0:
        if np.any(x.entries == 0):
            raise DomainError("law claims an empty zero side against the vector")
        # bias 0 makes every codebook cell 1, so row 1 matches outright
        return elias_delta_encode(1)
    return random_encode(
        x, q_zero / PARAM_SCALE, (PARAM_SCALE - q_query) / PARAM_SCALE, shared
    )


def _decode_partition(
    reader: BitReader, n: int, codec: str, seed: int, q_zero: int, q_query: int
) -> np.ndarray:
    shared = _side_shared(seed, q_zero, q_query)
    if codec == "random":
        return random_decode(reader, n, shared)
    return linear_decode(reader, n, shared)


def t4_encode(
    s: PolySet,
    q: PolySet,
    codec: str = "linear",
    seed: int = 0,
    p_s: float | None = None,
    p_q: float | None = None,
) -> Transmission:
    """Partition codeword for psi(s, q); decoder lands between s and q."""
    x = psi(s, q)
    emp_s, emp_q = _empirical_pair(x.entries)
    qs = quantize_param(p_s if p_s is not None else emp_s)
    qq = quantize_param(p_q if p_q is not None else emp_q)
    bits = _encode_partition(x, codec, seed, qs, qq)
    return Transmission("t4", s.m, codec, seed, (qs, qq, 0, 0), tuple(bits))


def t4_decode(tx: Transmission) -> PolySet:
    if tx.scenario != "t4":
        raise DomainError(f"expected a t4 transmission, got {tx.scenario}")
    n = 1 << tx.m
    reader = _payload_reader(tx)
    y = _decode_partition(reader, n, tx.codec, tx.seed, tx.params[0], tx.params[1])
    return reconstruct(AlgSet.from_bool_array(tx.m, y == 0))


def t5_encode(
    s: PolySet,
    q: PolySet,
    r: PolySet,
    codec: str = "linear",
    seed: int = 0,
    conditionals: tuple[float, float, float, float] | None = None,
) -> Transmission:
    """Code psi(s, q) separately inside and outside Z(r).

    The background may contradict s; the split only changes which
    codebook covers each coordinate, so the sandwich survives
    misinformation.  An empty side contributes no payload bits.
    """
    x = psi(s, q)
    if r.m != s.m:
        raise DomainError(f"universe mismatch: {s.m} vs {r.m}")
    mask = zeros(r).to_bool_array()
    inside, outside = x.entries[mask], x.entries[~mask]
    if conditionals is None:
        cin = _empirical_pair(inside) if inside.size else (0.0, 0.0)
        cout = _empirical_pair(outside) if outside.size else (0.0, 0.0)
        conditionals = (*cin, *cout)
    qp = tuple(quantize_param(c) for c in conditionals)
    bits: list[int] = []
    if inside.size:
        bits += _encode_partition(TernaryVector(inside), codec, seed, qp[0], qp[1])
    if outside.size:
        bits += _encode_partition(
            TernaryVector(outside), codec, derive_seed(seed, 1), qp[2], qp[3]
        )
    return Transmission("t5", s.m, codec, seed, qp, tuple(bits))


def t5_decode(tx: Transmission, r: PolySet) -> PolySet:
    if tx.scenario != "t5":
        raise DomainError(f"expected a t5 transmission, got {tx.scenario}")
    if r.m != tx.m:
        raise DomainError(f"background universe {r.m} does not match header {tx.m}")
    n = 1 << tx.m
    mask = zeros(r).to_bool_array()
    inner = int(np.count_nonzero(mask))
    reader = _payload_reader(tx)
    y = np.empty(n, dtype=np.uint8)
    if inner:
        y[mask] = _decode_partition(
            reader, inner, tx.codec, tx.seed, tx.params[0], tx.params[1]
        )
    if n - inner:
        y[~mask] = _decode_partition(
            reader, n - inner, tx.codec, derive_seed(tx.seed, 1),
            tx.params[2], tx.params[3],
        )
    return reconstruct(AlgSet.from_bool_array(tx.m, y == 0))


# --------------------------------------------------------------------------
# stream framing


def _scan_codeword(reader: BitReader, codec: str) -> None:
    j = reader.read_elias_delta()
    if codec == "linear":
        reader.read_bits(j)


def _scan_payload(
    scenario: str, codec: str | None, m: int, reader: BitReader, r: PolySet | None
) -> None:
    n = 1 << m
    if scenario == "t1":
        k = reader.read_elias_delta() - 1
        if k > n:
            raise MalformedCodeword(f"zero set size {k} exceeds universe {n}")
        reader.read_bits(rank_width(n, k))
        return
    if scenario in ("t2", "t3"):
        if r is None:
            raise DomainError(f"{scenario} payloads delimit only with the background")
        size = zeros(r).size
        k = reader.read_elias_delta() - 1
        if k > size:
            raise MalformedCodeword(f"zero set size {k} exceeds background {size}")
        reader.read_bits(rank_width(size, k))
        return
    if scenario == "t4":
        _scan_codeword(reader, codec)
        return
    if r is None:
        raise DomainError("t5 payloads delimit only with the background")
    inner = zeros(r).size
    if inner:
        _scan_codeword(reader, codec)
    if n - inner:
        _scan_codeword(reader, codec)


def peek_header(data: bytes, offset: int = 0) -> tuple[str, str | None, int]:
    """Validate a header and return (scenario, codec, universe size).

    Lets a caller learn the universe size before committing to a full
    parse, e.g. to read the background statements the payload needs.
    """
    if len(data) - offset < HEADER_BYTES:
        raise MalformedHeader("truncated header")
    head = data[offset : offset + HEADER_BYTES]
    if head[:4] != MAGIC:
        raise MalformedHeader(f"bad magic {head[:4]!r}")
    if head[4] not in _NAME_OF:
        raise MalformedHeader(f"unknown scenario tag {head[4]}")
    scenario = _NAME_OF[head[4]]
    if head[5] not in _CODEC_NAME:
        raise MalformedHeader(f"unknown codec id {head[5]}")
    codec = _CODEC_NAME[head[5]]
    if (codec is None) != (scenario in ("t1", "t2", "t3")):
        raise MalformedHeader("codec id inconsistent with scenario tag")
    m = int.from_bytes(head[6:8], "big")
    if not 1 <= m <= M_MAX:
        raise MalformedHeader(f"universe size {m} unsupported")
    return scenario, codec, m


def read_transmission(
    data: bytes, offset: int = 0, r: PolySet | None = None
) -> tuple[Transmission, int]:
    """Parse one transmission; returns it plus the offset just past it.

    Scenarios whose payload geometry depends on the background need r
    to find their own end.
    """
    scenario, codec, m = peek_header(data, offset)
    head = data[offset : offset + HEADER_BYTES]
    if r is not None and r.m != m:
        raise DomainError(f"background universe {r.m} does not match header {m}")
    seed = int.from_bytes(head[8:16], "big")
    params = tuple(
        int.from_bytes(head[16 + 2 * i : 18 + 2 * i], "big") for i in range(4)
    )
    start = (offset + HEADER_BYTES) * 8
    scanner = BitReader(data, bit_offset=start)
    _scan_payload(scenario, codec, m, scanner, r)
    nbits = scanner.bits_read - start
    collector = BitReader(data, bit_offset=start)
    payload = tuple(collector.read_bit() for _ in range(nbits))
    tx = Transmission(scenario, m, codec, seed, params, payload)
    return tx, offset + HEADER_BYTES + (nbits + 7) // 8
