"""Words over {a, b}, substitutions on two letters and their abelian data.

Words are plain ``str`` objects over the alphabet ``"abAB"``; the uppercase
letters denote the inverse generators a^-1 and b^-1.  A substitution is the
endomorphism of the free group F2 fixed by the images of ``a`` and ``b``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidInput,
    NoFixedSeed,
    NormalFormNotFound,
    NotHyperbolic,
    SubstitutionParseError,
    WordTooLong,
)

LETTERS = "abAB"
DEFAULT_WORD_CAP = 10**6
NORMAL_FORM_DEPTH = 20
SEED_MAX_POWER = 4

_INVERT = str.maketrans("abAB", "ABab")


def inverse_word(w: str) -> str:
    return w[::-1].translate(_INVERT)


def is_positive(w: str) -> bool:
    return "A" not in w and "B" not in w


def free_reduce(w: str) -> str:
    """Cancel adjacent ``xX`` / ``Xx`` pairs until none remain."""
    out: list[str] = []
    for c in w:
        if out and out[-1] == c.translate(_INVERT):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def _check_word(w: str, what: str = "word") -> None:
    bad = set(w) - set(LETTERS)
    if bad:
        raise InvalidInput(f"{what} {w!r} contains letters outside 'abAB': {sorted(bad)}")


def potential(word: str, i: int) -> int:
    """The 0/1 potential of a word: 1 on the letter ``a``, 0 on ``b``."""
    if not 0 <= i < len(word):
        raise IndexOutOfRange(f"index {i} outside word of length {len(word)}")
    return 1 if word[i] == "a" else 0


def potential_array(word: str) -> np.ndarray:
    return (np.frombuffer(word.encode("ascii"), dtype=np.uint8) == ord("a")).astype(np.int8)


@dataclass(frozen=True)
class Classification:
    positive: bool
    unimodular: bool
    hyperbolic: bool
    det: int
    trace: int


@dataclass(frozen=True)
class AbelianData:
    """Abelianization ``M``, its spectral radius and the normal-form data.

    ``N`` is a non-negative representative of the PGL2(Z) conjugacy class of
    ``M`` with ``N = sign * conjugator @ M @ conjugator^-1``; ``alpha`` and
    ``beta`` are the coordinates of the projection of (1, 1) onto the Perron
    eigenline of ``N`` along the other eigenline.
    """

    M: np.ndarray
    lam: float
    N: np.ndarray
    conjugator: np.ndarray
    sign: int
    alpha: float
    beta: float
    perron_vector: np.ndarray
    search_depth: int

    @property
    def alpha_plus_beta(self) -> float:
        return self.alpha + self.beta


_SWAP = np.array([[0, 1], [1, 0]], dtype=np.int64)
_SHEAR = np.array([[1, 1], [0, 1]], dtype=np.int64)
_SHEAR_INV = np.array([[1, -1], [0, 1]], dtype=np.int64)
_GENERATORS = (_SWAP, _SHEAR, _SHEAR_INV)


def _int_inverse(C: np.ndarray) -> np.ndarray:
    det = int(round(np.linalg.det(C)))
    (p, q), (r, s) = C
    return np.array([[s, -q], [-r, p]], dtype=np.int64) * det


def _perron_pair(N: np.ndarray) -> tuple[float, float, np.ndarray, np.ndarray]:
    tr = float(N[0, 0] + N[1, 1])
    det = float(N[0, 0] * N[1, 1] - N[0, 1] * N[1, 0])
    lam = 0.5 * (tr + math.sqrt(tr * tr - 4.0 * det))
    mu = det / lam
    p, q, r, s = (float(v) for v in N.ravel())

    def eigvec(ev: float) -> np.ndarray:
        if q != 0:
            v = np.array([q, ev - p])
        else:
            v = np.array([ev - s, r])
        return v / np.linalg.norm(v)

    v_lam = eigvec(lam)
    if v_lam[0] < 0 or v_lam[1] < 0:
        v_lam = -v_lam
    return lam, mu, v_lam, eigvec(mu)


@dataclass(frozen=True)
class Substitution:
    image_a: str
    image_b: str

    def __post_init__(self):
        for name, img in (("image of a", self.image_a), ("image of b", self.image_b)):
            if not img:
                raise InvalidInput(f"{name} must be non-empty")
            _check_word(img, name)

    @classmethod
    def parse(cls, text: str) -> "Substitution":
        """Parse ``"a>ab;b>a"``; uppercase letters are inverses."""
        images: dict[str, str] = {}
        pos = 0
        for chunk in text.split(";"):
            start = pos
            pos += len(chunk) + 1
            body = chunk.strip()
            if not body:
                continue
            col = start + chunk.index(body[0])
            if ">" not in body:
                raise SubstitutionParseError("expected 'letter>image'", text, col)
            lhs, rhs = (s.strip() for s in body.split(">", 1))
            if lhs not in ("a", "b"):
                raise SubstitutionParseError(f"left-hand side must be 'a' or 'b', got {lhs!r}", text, col)
            if lhs in images:
                raise SubstitutionParseError(f"duplicate rule for {lhs!r}", text, col)
            rhs_col = start + chunk.index(">") + 1
            for k, c in enumerate(chunk[chunk.index(">") + 1:]):
                if not c.isspace() and c not in LETTERS:
                    raise SubstitutionParseError(f"unexpected letter {c!r}", text, rhs_col + k)
            if not rhs:
                raise SubstitutionParseError(f"empty image for {lhs!r}", text, rhs_col)
            images[lhs] = rhs
        for letter in ("a", "b"):
            if letter not in images:
                raise SubstitutionParseError(f"missing rule for {letter!r}", text, len(text))
        return cls(images["a"], images["b"])

    def __str__(self) -> str:
        return f"a>{self.image_a};b>{self.image_b}"

    def image(self, letter: str) -> str:
        if letter == "a":
            return self.image_a
        if letter == "b":
            return self.image_b
        if letter == "A":
            return inverse_word(self.image_a)
        if letter == "B":
            return inverse_word(self.image_b)
        raise InvalidInput(f"unknown letter {letter!r}")

    def apply(self, w: str, cap: int = DEFAULT_WORD_CAP) -> str:
        """Homomorphic image of ``w`` (no free reduction)."""
        counts = {c: w.count(c) for c in LETTERS}
        length = sum(counts[c] * len(self.image(c)) for c in LETTERS)
        if length > cap:
            raise WordTooLong(length, cap)
        table = {c: self.image(c) for c in LETTERS}
        return "".join(table[c] for c in w)

    def compose(self, other: "Substitution") -> "Substitution":
        """``self ∘ other``: first ``other``, then ``self``."""
        return Substitution(self.apply(other.image_a), self.apply(other.image_b))

    def power(self, k: int) -> "Substitution":
        if k < 1:
            raise InvalidInput("power must be >= 1")
        out = self
        for _ in range(k - 1):
            out = self.compose(out)
        return out

    def iterate(self, w: str, n: int, cap: int = DEFAULT_WORD_CAP) -> str:
        for _ in range(n):
            w = self.apply(w, cap)
        return w

    def word_length(self, letter: str, n: int) -> int:
        """|ι^n(letter)| for positive substitutions, without materializing."""
        M = np.linalg.matrix_power(self.abelianization().astype(object), n)
        col = 0 if letter == "a" else 1
        return int(M[0, col] + M[1, col])

    def abelianization(self) -> np.ndarray:
        def counts(img: str) -> tuple[int, int]:
            return (img.count("a") - img.count("A"), img.count("b") - img.count("B"))

        ca, cb = counts(self.image_a), counts(self.image_b)
        return np.array([[ca[0], cb[0]], [ca[1], cb[1]]], dtype=np.int64)

    def classify(self) -> Classification:
        M = self.abelianization()
        det = int(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
        tr = int(M[0, 0] + M[1, 1])
        hyperbolic = (det == 1 and tr > 2) or (det == -1 and tr != 0)
        return Classification(
            positive=is_positive(self.image_a) and is_positive(self.image_b),
            unimodular=abs(det) == 1,
            hyperbolic=hyperbolic,
            det=det,
            trace=tr,
        )

    def abelian_data(self, max_depth: int = NORMAL_FORM_DEPTH) -> AbelianData:
        cls = self.classify()
        if not cls.hyperbolic:
            raise NotHyperbolic(f"{self}: det={cls.det}, tr={cls.trace} is not hyperbolic")
        M = self.abelianization()
        N, C, sign, depth = _nonnegative_conjugate(M, max_depth)
        lam_M = float(max(abs(np.linalg.eigvals(M.astype(float)))))
        lam, mu, v_lam, v_mu = _perron_pair(N)
        c = np.linalg.solve(np.column_stack([v_lam, v_mu]), np.ones(2))
        alpha, beta = c[0] * v_lam
        # lam from N is exact-ish; keep it since both are the same quadratic integer
        assert abs(lam - lam_M) <= 1e-9 * lam_M
        return AbelianData(
            M=M, lam=lam, N=N, conjugator=C, sign=sign,
            alpha=float(alpha), beta=float(beta),
            perron_vector=v_lam, search_depth=depth,
        )

    def invariant_word_prefix(self, n: int, cap: int = DEFAULT_WORD_CAP) -> str:
        """First ``n`` letters of the one-sided fixed point of some power of ι.

        Seeds are searched over powers k <= 4 and letters (a, b) for ι^k(x)
        beginning with x.  A growing seed is preferred; a letter with
        ι^k(x) == x gives the constant word x x x ...
        """
        if not (is_positive(self.image_a) and is_positive(self.image_b)):
            raise InvalidInput("invariant word needs a positive substitution")
        if n > cap:
            raise WordTooLong(n, cap)
        fixed_letter = None
        for k in range(1, SEED_MAX_POWER + 1):
            sub_k = self.power(k)
            for x in "ab":
                img = sub_k.image(x)
                if img[0] != x:
                    continue
                if len(img) > 1:
                    grow = max(len(sub_k.image_a), len(sub_k.image_b))
                    w = x
                    while len(w) < n:
                        w = sub_k.apply(w[:n], cap=n * grow)[:n]
                    return w[:n]
                if fixed_letter is None:
                    fixed_letter = x
        if fixed_letter is not None:
            return fixed_letter * n
        raise NoFixedSeed(f"{self}: no letter x, power k <= {SEED_MAX_POWER} with ι^k(x) starting with x")


FIBONACCI = Substitution("ab", "a")
FIBONACCI_INVERSE = Substitution("b", "Ba")


def is_identity_on_generators(sub: Substitution) -> bool:
    return free_reduce(sub.image_a) == "a" and free_reduce(sub.image_b) == "b"


def _nonnegative_conjugate(M: np.ndarray, max_depth: int):
    """Breadth-first search over conjugators built from (swap, shear, shear^-1)."""
    start = np.eye(2, dtype=np.int64)
    queue = deque([(start, 0)])
    seen = {start.tobytes()}
    while queue:
        C, depth = queue.popleft()
        N = C @ M @ _int_inverse(C)
        if (N >= 0).all():
            return N, C, 1, depth
        if (N <= 0).all():
            return -N, C, -1, depth
        if depth == max_depth:
            continue
        for g in _GENERATORS:
            C2 = g @ C
            key = C2.tobytes()
            if key not in seen:
                seen.add(key)
                queue.append((C2, depth + 1))
    raise NormalFormNotFound(max_depth)
