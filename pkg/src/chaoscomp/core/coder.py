"""
Interval coding by back iteration.

A symbol sequence is encoded by the set of initial conditions that
produce it. Running the inverse branches from the last symbol to the
first shrinks [0, 1) to that set; its width is the probability of the
sequence under the map and -log2 of the width is its description length.

Explicit intervals are computed with exact rationals so they stay valid
long after their width drops below float resolution. Classification only
needs the length, which is summed in the log domain instead.
"""

import math
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from chaoscomp.core.logger import logger
from chaoscomp.core.types import FloatArray
from chaoscomp.schemas.model import (
    BakerParams,
    ChaosCompModel,
    CodeLength,
    OptimalitySummary,
    ReturnMapModel,
    UnitInterval,
    WordSequence,
)

ProbabilitySource = Union[ReturnMapModel, Sequence[float], FloatArray]


def back_iterate_binary(bits: npt.ArrayLike, params: BakerParams) -> Tuple[UnitInterval, float]:
    """Interval of initial conditions whose Baker's map symbols are `bits`."""
    symbols = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if symbols.size == 0:
        raise ValueError("empty symbol sequence")

    a = Fraction(params.a)
    reverse = symbols[::-1]
    lower, upper = (Fraction(0), a) if reverse[0] == 0 else (a, Fraction(1))
    for symbol in reverse[1:]:
        if symbol == 0:
            lower, upper = a * lower, a * upper
        else:
            lower, upper = (1 - a) * lower + a, (1 - a) * upper + a
        # Both inverse branches are increasing, so the order never flips
        assert lower < upper, "inverse branch reversed the interval"

    interval = UnitInterval(lower=lower, upper=upper)
    return interval, interval.midpoint


def back_iterate_words(words: WordSequence, model: ReturnMapModel) -> Tuple[UnitInterval, float]:
    """
    Interval of initial conditions whose n-th return map words are `words`.

    The seed is the cell of the last word; each earlier word j maps the
    interval through the inverse branch x -> p_j * x + cum[j].
    """
    if len(words) == 0:
        raise ValueError("empty word sequence")
    if words.n != model.n:
        raise ValueError(f"word length {words.n} does not match map order {model.n}")

    cum = model.exact_cum
    last = int(words.words[-1])
    lower, upper = cum[last], cum[last + 1]
    for word in words.words[-2::-1]:
        j = int(word)
        width = cum[j + 1] - cum[j]
        lower, upper = width * lower + cum[j], width * upper + cum[j]
        assert lower < upper, "inverse branch reversed the interval"

    interval = UnitInterval(lower=lower, upper=upper)
    return interval, interval.midpoint


def code_length(interval: UnitInterval) -> CodeLength:
    """ceil(-log2(U - L)) together with the exact value."""
    width = interval.upper - interval.lower
    if width <= 0:
        raise ValueError("degenerate interval")
    # log2 of numerator and denominator separately never underflows
    exact = math.log2(width.denominator) - math.log2(width.numerator)
    return CodeLength.from_exact(exact)


def _probabilities(source: ProbabilitySource) -> FloatArray:
    if isinstance(source, ReturnMapModel):
        return source.probs_array
    return np.asarray(source, dtype=np.float64).reshape(-1)


def code_length_log_domain(words: WordSequence, model: ProbabilitySource) -> CodeLength:
    """Same length as back iteration, as -sum(log2 p) over the words."""
    probs = _probabilities(model)
    if probs.size != 1 << words.n:
        raise ValueError(f"expected {1 << words.n} word probabilities, got {probs.size}")
    if len(words) == 0:
        return CodeLength.from_exact(0.0)

    counts = np.bincount(words.words, minlength=probs.size)
    used = counts > 0
    if np.any(probs[used] <= 0.0):
        raise ValueError("unsmoothed zero probability")
    exact = -float(counts[used] @ np.log2(probs[used]))
    return CodeLength.from_exact(exact)


def model_entropy(model: ReturnMapModel) -> float:
    """H_n = -sum p_w log2 p_w, bits per word."""
    return -math.fsum(p * math.log2(p) for p in model.probs)


def baker_entropy(a: float) -> float:
    """Entropy of the first-return map with skewness a, in bits."""
    if not (0.0 < a < 1.0):
        raise ValueError(f"skewness must lie in (0, 1), got {a!r}")
    return -a * math.log2(a) - (1.0 - a) * math.log2(1.0 - a)


def lyapunov_exponent(model: ReturnMapModel) -> float:
    """
    Mean log2 stretching rate under the invariant (Lebesgue) measure.

    Cell w has slope 1/p_w and measure p_w.
    """
    return math.fsum(p * math.log2(1.0 / p) for p in model.probs)


def class_entropy_report(model: ChaosCompModel) -> List[dict]:
    """Per-class entropy figures of a trained classifier."""
    rows = []
    for name, dist in zip(model.class_names, model.classes):
        return_map = dist.return_map
        entropy = model_entropy(return_map)
        row = {
            "class": name,
            "entropy_bits_per_word": entropy,
            "entropy_bits_per_symbol": entropy / model.n,
            "lyapunov": lyapunov_exponent(return_map),
        }
        if model.n == 1:
            row["baker_entropy"] = baker_entropy(dist.probs[0])
        rows.append(row)
    return rows


def shannon_optimality_trial(p0: float, length: int, trials: int, seed: int) -> OptimalitySummary:
    """
    Code i.i.d. binary draws with the Baker's map matched to each draw.

    The skewness is set to the draw's own fraction of zeros; the ceiled
    code length per symbol then lies within 1/length of the draw's
    empirical entropy, which in turn fluctuates around H(p0).
    """
    if not (0.0 < p0 < 1.0):
        raise ValueError(f"p0 must lie in (0, 1), got {p0!r}")
    if length < 100:
        raise ValueError("sequence length must be >= 100")
    if trials < 1:
        raise ValueError("at least one trial is required")

    rng = np.random.default_rng(seed)
    entropy = baker_entropy(p0)
    rates: List[float] = []
    empirical: List[float] = []
    for trial in range(trials):
        bits = (rng.random(length) >= p0).astype(np.uint8)
        zeros = length - int(bits.sum())
        while zeros in (0, length):
            logger.debug(f"Trial {trial}: degenerate draw, resampling")
            bits = (rng.random(length) >= p0).astype(np.uint8)
            zeros = length - int(bits.sum())

        a = zeros / length
        matched = ReturnMapModel(probs=(a, 1.0 - a))
        size = code_length_log_domain(WordSequence(n=1, words=bits), matched)
        rates.append(size.ceil_bits / length)
        empirical.append(baker_entropy(a))

    rate_array = np.asarray(rates)
    std_error = float(rate_array.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    summary = OptimalitySummary(
        p0=p0,
        length=length,
        trials=trials,
        entropy=entropy,
        mean_bits_per_symbol=float(rate_array.mean()),
        std_error=std_error,
        max_deviation=float(np.max(np.abs(rate_array - entropy))),
        max_excess_over_empirical=float(np.max(rate_array - np.asarray(empirical))),
        bits_per_symbol=rates,
        empirical_entropy=empirical,
    )
    logger.debug(
        f"Optimality trial p0={p0}: mean {summary.mean_bits_per_symbol:.6f} bits/symbol, H={entropy:.6f}"
    )
    return summary
