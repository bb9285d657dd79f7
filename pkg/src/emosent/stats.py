"""Cross-domain distribution comparison and information-theoretic statistics.

The two-sample tests follow the permutation-null convention: exact p-values
(small samples) are computed under all label reassignments of the combined
multiset, conditional on the observed tie pattern; large samples fall back to
the standard asymptotics (tie-corrected normal for the rank-sum test, the
Kolmogorov distribution with effective sample size for the ECDF test). Every
p-value is two-sided and invariant under swapping the samples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .errors import DataError, NumericError
from .tokenizer import TokenizerMode, TokenKind, extract_emojis, tokenize

__all__ = [
    "FrequencyBasis",
    "FrequencyDistribution",
    "TestResult",
    "EntropyReport",
    "presence_frequencies",
    "token_frequencies",
    "mann_whitney_u",
    "ks_two_sample",
    "chi_square",
    "cramers_v",
    "entropy_top_mass",
    "compare_corpora",
]

MANN_WHITNEY_EXACT_MAX_PRODUCT = 400
KS_EXACT_MAX_TOTAL = 20


class FrequencyBasis(Enum):
    PRESENCE = "presence"
    OCCURRENCE = "occurrence"


@dataclass(frozen=True)
class FrequencyDistribution:
    counts: dict[str, int]
    total: int
    basis: FrequencyBasis

    def relative(self, symbol: str) -> float:
        return self.counts.get(symbol, 0) / self.total if self.total else 0.0


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str
    n_a: int
    n_b: int

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n_a": self.n_a,
            "n_b": self.n_b,
        }


@dataclass(frozen=True)
class EntropyReport:
    entropy_bits: float
    mass: float
    kept_symbols: int
    unique_symbols: int
    avg_token_length: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def presence_frequencies(
    c: Corpus, mode: TokenizerMode = TokenizerMode.PAPER_REGEX
) -> FrequencyDistribution:
    """Per-emoji count of posts containing it (dedup within post)."""
    counts: dict[str, int] = {}
    for p in c.posts:
        for e in set(extract_emojis(p.body, mode)):
            counts[e] = counts.get(e, 0) + 1
    return FrequencyDistribution(counts=counts, total=sum(counts.values()), basis=FrequencyBasis.PRESENCE)


def token_frequencies(
    c: Corpus,
    kind: TokenKind,
    basis: FrequencyBasis = FrequencyBasis.OCCURRENCE,
    mode: TokenizerMode = TokenizerMode.PAPER_REGEX,
) -> FrequencyDistribution:
    """Frequency distribution of word or emoji tokens across a corpus."""
    counts: dict[str, int] = {}
    for p in c.posts:
        texts = [t.text for t in tokenize(p.body, mode) if t.kind is kind]
        if basis is FrequencyBasis.PRESENCE:
            texts = sorted(set(texts))
        for t in texts:
            counts[t] = counts.get(t, 0) + 1
    return FrequencyDistribution(counts=counts, total=sum(counts.values()), basis=basis)


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _mwu_exact_p(doubled_ranks: list[int], n_a: int, s_obs: int) -> float:
    """Exact two-sided p for the rank-sum permutation null.

    Counts, via a subset-sum DP over the (doubled, hence integer) midranks,
    how many size-n_a label assignments produce a rank sum at least as far
    from its mean as the observed one. Equivalent to full enumeration of all
    C(N, n_a) assignments, ties included.
    """
    n = len(doubled_ranks)
    smax = sum(doubled_ranks)
    dp = np.zeros((n_a + 1, smax + 1), dtype=np.int64)
    dp[0, 0] = 1
    for r in doubled_ranks:
        upper = min(n_a, n)  # rows beyond n_a never matter
        for k in range(upper, 0, -1):
            dp[k, r:] += dp[k - 1, : smax + 1 - r]
    counts = dp[n_a]
    total = counts.sum()
    s_mean2 = n_a * (n + 1)  # doubled mean of the rank sum
    dev_obs = abs(s_obs - s_mean2)
    sums = np.arange(smax + 1)
    extreme = np.abs(sums - s_mean2) >= dev_obs
    return float(counts[extreme].sum() / total)


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sample Mann-Whitney U test (midrank ties, two-sided).

    The statistic is U of the first sample (number of (a, b) pairs with
    a > b, ties counting one half). Exact permutation p-value when
    n_a * n_b <= 400, else normal approximation with tie-corrected variance
    and continuity correction.
    """
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise DataError("mann_whitney_u requires non-empty samples")
    combined = list(a) + list(b)
    ranks = _midranks(combined)
    r_a = sum(ranks[:n_a])
    u_a = r_a - n_a * (n_a + 1) / 2.0
    mu = n_a * n_b / 2.0

    if n_a * n_b <= MANN_WHITNEY_EXACT_MAX_PRODUCT:
        doubled = [int(round(2 * r)) for r in ranks]
        p = _mwu_exact_p(doubled, n_a, int(round(2 * r_a)))
    else:
        n = n_a + n_b
        tie_term = 0.0
        seen: dict[float, int] = {}
        for v in combined:
            seen[v] = seen.get(v, 0) + 1
        for t in seen.values():
            tie_term += t**3 - t
        var = (n_a * n_b / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
        if var <= 0:
            p = 1.0
        else:
            z = max(abs(u_a - mu) - 0.5, 0.0) / math.sqrt(var)
            p = min(1.0, 2.0 * _normal_sf(z))
    return TestResult(statistic=u_a, p_value=p, method="mann-whitney-u", n_a=n_a, n_b=n_b)


def _ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    sa, sb = sorted(a), sorted(b)
    n_a, n_b = len(sa), len(sb)
    i = j = 0
    d = 0.0
    # Once one sample is exhausted its ECDF sits at 1 while the other only
    # climbs toward 1, so the merge loop has already seen the supremum.
    while i < n_a and j < n_b:
        v = min(sa[i], sb[j])
        while i < n_a and sa[i] == v:
            i += 1
        while j < n_b and sb[j] == v:
            j += 1
        d = max(d, abs(i / n_a - j / n_b))
    return d


def _kolmogorov_sf(lam: float) -> float:
    if lam < 1e-8:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
        total += term
        if abs(term) < 1e-16:
            break
    return min(1.0, max(0.0, total))


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sample Kolmogorov-Smirnov test.

    D = sup |ECDF_a - ECDF_b|. Exact permutation p-value when
    n_a + n_b <= 20, else the asymptotic Kolmogorov distribution evaluated at
    sqrt(n_a*n_b/(n_a+n_b)) * D.
    """
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise DataError("ks_two_sample requires non-empty samples")
    d_obs = _ks_statistic(a, b)
    n = n_a + n_b
    if n <= KS_EXACT_MAX_TOTAL:
        combined = sorted(list(a) + list(b))
        hits = 0
        trials = 0
        for picked in itertools.combinations(range(n), n_a):
            sel = set(picked)
            xa = [combined[i] for i in picked]
            xb = [combined[i] for i in range(n) if i not in sel]
            trials += 1
            if _ks_statistic(xa, xb) >= d_obs - 1e-12:
                hits += 1
        p = hits / trials
    else:
        lam = math.sqrt(n_a * n_b / n) * d_obs
        p = _kolmogorov_sf(lam)
    return TestResult(statistic=d_obs, p_value=p, method="kolmogorov-smirnov", n_a=n_a, n_b=n_b)


def _gamma_upper_regularized(s: float, x: float) -> float:
    """Q(s, x): upper regularized incomplete gamma, |error| < 1e-12.

    Series for the lower function when x < s + 1, Lentz continued fraction
    otherwise (the classic cephes split).
    """
    if x < 0 or s <= 0:
        raise NumericError("invalid incomplete gamma arguments")
    if x == 0.0:
        return 1.0
    log_prefix = s * math.log(x) - x - math.lgamma(s)
    if x < s + 1.0:
        # P(s,x) by power series; Q = 1 - P.
        term = 1.0 / s
        total = term
        k = s
        for _ in range(10_000):
            k += 1.0
            term *= x / k
            total += term
            if abs(term) < abs(total) * 1e-16:
                break
        return max(0.0, min(1.0, 1.0 - math.exp(log_prefix) * total))
    # Q(s,x) by continued fraction (modified Lentz).
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return max(0.0, min(1.0, math.exp(log_prefix) * h))


def chi_square(table: Sequence[Sequence[float]]) -> TestResult:
    """Pearson chi-square test of independence on an r x k count table.

    No continuity correction. The p-value is the upper chi-square tail
    computed from the regularized incomplete gamma function.
    """
    obs = np.asarray(table, dtype=np.float64)
    if obs.ndim != 2 or obs.shape[0] < 2 or obs.shape[1] < 2:
        raise DataError("chi_square requires an r x k table with r, k >= 2")
    if (obs < 0).any():
        raise DataError("chi_square requires nonnegative counts")
    row = obs.sum(axis=1)
    col = obs.sum(axis=0)
    n = obs.sum()
    if (row == 0).any() or (col == 0).any() or n == 0:
        raise DataError("chi_square requires nonzero marginal rows and columns")
    expected = np.outer(row, col) / n
    stat = float(((obs - expected) ** 2 / expected).sum())
    df = (obs.shape[0] - 1) * (obs.shape[1] - 1)
    p = _gamma_upper_regularized(df / 2.0, stat / 2.0)
    return TestResult(statistic=stat, p_value=p, method="chi-square", n_a=int(row[0]), n_b=int(row[-1]))


def cramers_v(chi2: float, n: int, r: int, k: int) -> float:
    """Cramer's V effect size: sqrt(chi2 / (n * min(k-1, r-1)))."""
    m = min(k - 1, r - 1)
    if n <= 0 or m < 1:
        raise DataError("cramers_v requires n > 0 and a table at least 2x2")
    return math.sqrt(chi2 / (n * m))


def entropy_top_mass(
    d: FrequencyDistribution, mass: float = 0.9, renormalize: bool = True
) -> EntropyReport:
    """Shannon entropy (bits) of the high-frequency head of a distribution.

    Symbols are sorted by count descending (count ties break by code point);
    the shortest prefix whose cumulative relative frequency reaches ``mass``
    is kept and renormalized before the entropy computation (set
    ``renormalize=False`` to keep the original probabilities). Also reports
    the kept/unique symbol counts and the frequency-weighted mean symbol
    length in characters over the kept set.
    """
    if not d.counts or d.total <= 0:
        raise DataError("entropy_top_mass requires a non-empty distribution")
    if not 0.0 < mass <= 1.0:
        raise DataError("mass must lie in (0, 1]")
    ranked = sorted(d.counts.items(), key=lambda kv: (-kv[1], tuple(ord(c) for c in kv[0])))
    kept: list[tuple[str, int]] = []
    cum = 0
    for sym, count in ranked:
        kept.append((sym, count))
        cum += count
        if cum / d.total >= mass - 1e-12:
            break
    kept_total = sum(count for _, count in kept)
    entropy = 0.0
    denom = kept_total if renormalize else d.total
    for _, count in kept:
        if count == 0:
            continue
        p = count / denom
        entropy -= p * math.log2(p)
    weighted_len = sum(len(sym) * count for sym, count in kept)
    return EntropyReport(
        entropy_bits=entropy,
        mass=mass,
        kept_symbols=len(kept),
        unique_symbols=len(d.counts),
        avg_token_length=weighted_len / kept_total if kept_total else 0.0,
    )


def _rank_map(dist: FrequencyDistribution) -> dict[str, float]:
    """Emoji -> rank (1 = most frequent), count ties sharing the midrank."""
    ranked = sorted(dist.counts.items(), key=lambda kv: (-kv[1], tuple(ord(c) for c in kv[0])))
    out: dict[str, float] = {}
    i = 0
    while i < len(ranked):
        j = i
        while j + 1 < len(ranked) and ranked[j + 1][1] == ranked[i][1]:
            j += 1
        avg = (i + j) / 2 + 1.0
        for k in range(i, j + 1):
            out[ranked[k][0]] = avg
        i = j + 1
    return out


def _top_symbols(dist: FrequencyDistribution, k: int) -> list[str]:
    ranked = sorted(dist.counts.items(), key=lambda kv: (-kv[1], tuple(ord(c) for c in kv[0])))
    return [sym for sym, _ in ranked[:k]]


def compare_corpora(
    a: Corpus,
    b: Corpus,
    top_k: int = 20,
    samples_mode: str = "frequencies",
    mass: float = 0.9,
    mode: TokenizerMode = TokenizerMode.PAPER_REGEX,
) -> dict:
    """Cross-domain emoji usage comparison report.

    Builds presence distributions for both corpora, a rank/frequency table for
    corpus A's top_k emojis, rank tests over the union of both top-k sets
    (``samples_mode="frequencies"`` feeds per-emoji relative frequencies;
    ``"expanded"`` feeds rank-coded samples expanded by presence count), plus
    the chi-square test and Cramer's V on the 2 x union contingency table and
    per-corpus entropy reports.
    """
    if samples_mode not in ("frequencies", "expanded"):
        raise DataError(f"unknown samples_mode: {samples_mode!r}")
    fa = presence_frequencies(a, mode)
    fb = presence_frequencies(b, mode)
    if not fa.counts or not fb.counts:
        raise DataError("both corpora need at least one emoji-bearing post")

    union = sorted(
        set(_top_symbols(fa, top_k)) | set(_top_symbols(fb, top_k)),
        key=lambda e: (-(fa.counts.get(e, 0) + fb.counts.get(e, 0)), tuple(ord(c) for c in e)),
    )
    rel_a = [fa.relative(e) for e in union]
    rel_b = [fb.relative(e) for e in union]

    if samples_mode == "frequencies":
        sample_a, sample_b = rel_a, rel_b
    else:
        sample_a, sample_b = [], []
        for i, e in enumerate(union):
            sample_a.extend([float(i)] * fa.counts.get(e, 0))
            sample_b.extend([float(i)] * fb.counts.get(e, 0))

    tests = [mann_whitney_u(sample_a, sample_b), ks_two_sample(sample_a, sample_b)]
    table = [[fa.counts.get(e, 0) for e in union], [fb.counts.get(e, 0) for e in union]]
    chi = chi_square(table)
    tests.append(chi)
    v = cramers_v(chi.statistic, int(sum(map(sum, table))), 2, len(union))

    ranks_a = _rank_map(fa)
    ranks_b = _rank_map(fb)
    rank_table = [
        {
            "emoji": e,
            "rank_a": ranks_a.get(e),
            "rank_b": ranks_b.get(e),
            "rel_freq_a": fa.relative(e),
            "rel_freq_b": fb.relative(e),
        }
        for e in _top_symbols(fa, top_k)
    ]

    return {
        "samples_mode": samples_mode,
        "top_k": top_k,
        "distributions": {
            "corpus_a": {"total": fa.total, "unique": len(fa.counts)},
            "corpus_b": {"total": fb.total, "unique": len(fb.counts)},
        },
        "rank_table": rank_table,
        "tests": [t.to_dict() for t in tests],
        "cramers_v": v,
        "entropy_reports": {
            "corpus_a": entropy_top_mass(fa, mass).to_dict(),
            "corpus_b": entropy_top_mass(fb, mass).to_dict(),
        },
    }
