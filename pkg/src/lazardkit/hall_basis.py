"""Hall basis of the free nilpotent Lie algebra and bracket rewriting.

Elements are ordered by weight, then by the positions of their left and right
factors.  A bracket ``(u, v)`` is basic when ``u > v`` and, if ``u = (u', u'')``,
also ``u'' <= v``.  Coefficients at this layer are plain integers (or any ring
elements supporting ``+`` and ``*``, which the rational BCH code relies on).
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field

from .errors import SizeLimitExceeded

DEFAULT_SIZE_CAP = 10000


@dataclass(frozen=True)
class HallElement:
    weight: int
    gen: int | None = None
    left: "HallElement | None" = None
    right: "HallElement | None" = None
    position: int = field(default=-1, compare=False, hash=False)

    @property
    def is_generator(self) -> bool:
        return self.gen is not None

    def to_string(self, names=None) -> str:
        if self.is_generator:
            return names[self.gen - 1] if names else f"x{self.gen}"
        return f"[{self.left.to_string(names)},{self.right.to_string(names)}]"

    def __str__(self):
        return self.to_string()


def mobius(n: int) -> int:
    res, m, f = 1, n, 2
    while f * f <= m:
        if m % f == 0:
            m //= f
            if m % f == 0:
                return 0
            res = -res
        f += 1
    if m > 1:
        res = -res
    return res


def witt_dimension(d: int, n: int) -> int:
    total = sum(mobius(k) * d ** (n // k) for k in range(1, n + 1) if n % k == 0)
    return total // n


class HallBasis:
    """Hall basis of L_c(X) for |X| = d, with memoized pairwise brackets."""

    def __init__(self, d: int, c: int, cap: int = DEFAULT_SIZE_CAP):
        if d < 1 or c < 1:
            raise ValueError("d and c must be positive")
        expected = sum(witt_dimension(d, n) for n in range(1, c + 1))
        if expected > cap:
            raise SizeLimitExceeded(
                f"Hall basis for d={d}, c={c} has {expected} elements (cap {cap})"
            )
        self.d = d
        self.c = c
        elems: list[HallElement] = []
        for g in range(1, d + 1):
            elems.append(HallElement(1, gen=g, position=len(elems)))
        by_weight = {1: list(elems)}
        for n in range(2, c + 1):
            cands = []
            for wu in range(1, n):
                wv = n - wu
                for u in by_weight[wu]:
                    for v in by_weight[wv]:
                        if u.position <= v.position:
                            continue
                        if not u.is_generator and u.right.position > v.position:
                            continue
                        cands.append((u.position, v.position, u, v))
            cands.sort(key=lambda t: (t[0], t[1]))
            layer = []
            for _, _, u, v in cands:
                h = HallElement(n, left=u, right=v, position=len(elems))
                elems.append(h)
                layer.append(h)
            by_weight[n] = layer
        self.elements = elems
        self.index = {h: h.position for h in elems}
        self._pair_index = {
            (h.left.position, h.right.position): h.position
            for h in elems
            if not h.is_generator
        }
        self._memo: dict[tuple[int, int], dict[int, int]] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i) -> HallElement:
        return self.elements[i]

    @property
    def weights(self) -> list[int]:
        return [h.weight for h in self.elements]

    def weight_profile(self) -> list[int]:
        prof = [0] * self.c
        for h in self.elements:
            prof[h.weight - 1] += 1
        return prof

    def generator(self, g: int) -> HallElement:
        return self.elements[g - 1]

    # -- rewriting ---------------------------------------------------------

    def pair(self, a: int, b: int) -> dict[int, int]:
        """[h_a, h_b] in Hall coordinates (positions -> integer coefficients)."""
        key = (a, b)
        res = self._memo.get(key)
        if res is not None:
            return res
        res = self._pair(a, b)
        with self._lock:
            self._memo.setdefault(key, res)
        return res

    def _pair(self, a: int, b: int) -> dict[int, int]:
        if a == b:
            return {}
        if a < b:
            return {k: -v for k, v in self.pair(b, a).items()}
        u, v = self.elements[a], self.elements[b]
        if u.weight + v.weight > self.c:
            return {}
        if u.is_generator or u.right.position <= b:
            return {self._pair_index[(a, b)]: 1}
        # [[u1,u2],v] = [[u1,v],u2] - [[u2,v],u1]
        u1, u2 = u.left.position, u.right.position
        out: dict[int, int] = {}
        for w, cw in self.pair(u1, b).items():
            for k, ck in self.pair(w, u2).items():
                out[k] = out.get(k, 0) + cw * ck
        for w, cw in self.pair(u2, b).items():
            for k, ck in self.pair(w, u1).items():
                out[k] = out.get(k, 0) - cw * ck
        return {k: v for k, v in out.items() if v}

    def bracket_table(self) -> dict[tuple[int, int], dict[int, int]]:
        n = len(self)
        return {(a, b): self.pair(a, b) for a in range(n) for b in range(n)}

    # -- parsing -----------------------------------------------------------

    def parse(self, text: str, names=None) -> HallElement:
        """Inverse of ``HallElement.to_string`` for elements of this basis."""
        tokens = re.findall(r"\[|\]|,|[A-Za-z_][A-Za-z_0-9]*", text.replace(" ", ""))
        pos = 0

        def atom():
            nonlocal pos
            tok = tokens[pos]
            if tok == "[":
                pos += 1
                left = atom()
                if tokens[pos] != ",":
                    raise ValueError(f"expected ',' in {text!r}")
                pos += 1
                right = atom()
                if tokens[pos] != "]":
                    raise ValueError(f"expected ']' in {text!r}")
                pos += 1
                key = (self.index[left], self.index[right])
                if key not in self._pair_index:
                    raise ValueError(f"{text!r} is not a Hall element")
                return self.elements[self._pair_index[key]]
            pos += 1
            if names:
                g = names.index(tok) + 1
            else:
                m = re.fullmatch(r"x(\d+)", tok)
                if not m:
                    raise ValueError(f"unknown generator {tok!r}")
                g = int(m.group(1))
            if not 1 <= g <= self.d:
                raise ValueError(f"generator {tok!r} out of range")
            return self.elements[g - 1]

        h = atom()
        if pos != len(tokens):
            raise ValueError(f"trailing input in {text!r}")
        return h


def _add_into(out: dict, k, v):
    s = out.get(k, 0) + v
    if s:
        out[k] = s
    else:
        out.pop(k, None)


def bracket_reduce(a: dict, b: dict, basis: HallBasis) -> dict:
    """Bilinear bracket of two sparse combinations, truncated above weight c."""
    out: dict = {}
    for i, ci in a.items():
        if not ci:
            continue
        for j, cj in b.items():
            if not cj:
                continue
            for k, ck in basis.pair(i, j).items():
                _add_into(out, k, ci * cj * ck)
    return out


def generate_hall_basis(d: int, c: int, cap: int = DEFAULT_SIZE_CAP) -> HallBasis:
    return HallBasis(d, c, cap)


def element_to_words(h: HallElement) -> dict[tuple[int, ...], int]:
    """Image of a Hall element in the free associative algebra (uv - vu)."""
    if h.is_generator:
        return {(h.gen,): 1}
    L = element_to_words(h.left)
    R = element_to_words(h.right)
    out: dict = {}
    for wl, cl in L.items():
        for wr, cr in R.items():
            _add_into(out, wl + wr, cl * cr)
            _add_into(out, wr + wl, -cl * cr)
    return out
