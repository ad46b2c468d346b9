"""
Symbolic dynamics of the Baker's map family.

Feature vectors become bit streams by thresholding; bit streams become
n-bit words read most significant bit first. The forward maps are kept
for verification; training works on word statistics only.
"""

from typing import Tuple

import numpy as np
import numpy.typing as npt

from chaoscomp.core.logger import logger
from chaoscomp.core.types import BitSequence, FloatArray, IntArray
from chaoscomp.schemas.model import BakerParams, ReturnMapModel, WordSequence

# Largest double below 1; maps live on the half-open interval [0, 1)
BELOW_ONE: float = float(np.nextafter(1.0, 0.0))


def clamp_unit(x: float) -> float:
    """Pull a value in [0, 1] into [0, 1)."""
    return BELOW_ONE if x >= 1.0 else x


def _check_unit(x: float) -> None:
    if not (0.0 <= x < 1.0):
        raise ValueError(f"point {x!r} lies outside [0, 1)")


def _word_weights(n: int) -> IntArray:
    return (1 << np.arange(n - 1, -1, -1)).astype(np.int64)


def binarize(x: npt.ArrayLike, threshold: float) -> BitSequence:
    """Bit i is 1 iff x[i] >= threshold."""
    values = np.asarray(x, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ValueError("empty instance")
    return (values >= threshold).astype(np.uint8)


def pad_bits(bits: npt.ArrayLike, n: int, pad_symbol: int = 1) -> BitSequence:
    """Append pad_symbol until the length is a multiple of n."""
    if n < 1:
        raise ValueError(f"word length must be >= 1, got {n}")
    seq = np.asarray(bits, dtype=np.uint8).reshape(-1)
    remainder = seq.size % n
    if remainder == 0:
        return seq
    return np.concatenate((seq, np.full(n - remainder, pad_symbol, dtype=np.uint8)))


def extract_words(bits: npt.ArrayLike, n: int) -> WordSequence:
    """Split a padded bit stream into non-overlapping big-endian words."""
    seq = np.asarray(bits, dtype=np.int64).reshape(-1)
    if n < 1 or seq.size % n:
        raise ValueError("unpadded sequence")
    return WordSequence(n=n, words=seq.reshape(-1, n) @ _word_weights(n))


def word_frequencies(words: WordSequence) -> FloatArray:
    """Empirical probability of every n-bit word, indexed by word value."""
    if len(words) == 0:
        raise ValueError("empty word sequence")
    counts = np.bincount(words.words, minlength=1 << words.n)
    return counts / counts.sum()


def baker_forward(x: float, params: BakerParams) -> float:
    """One step of the skewed Baker's map."""
    _check_unit(x)
    a = params.a
    if x < a:
        return clamp_unit(x / a)
    return clamp_unit((x - a) / (1.0 - a))


def symbolize_trajectory(x0: float, params: BakerParams, steps: int) -> BitSequence:
    """Symbols of the first `steps` iterates, 0 below a and 1 at or above it."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    x = BELOW_ONE if x0 == 1.0 else x0
    _check_unit(x)
    bits = np.empty(steps, dtype=np.uint8)
    for i in range(steps):
        bits[i] = 0 if x < params.a else 1
        if i + 1 < steps:
            x = baker_forward(x, params)
    return bits


def return_map_forward(x: float, model: ReturnMapModel) -> Tuple[float, int]:
    """Locate the cell holding x and stretch it onto [0, 1)."""
    _check_unit(x)
    cum = model.cum
    word = int(np.searchsorted(cum, x, side="right")) - 1
    word = min(max(word, 0), len(model.probs) - 1)
    return clamp_unit((x - cum[word]) / model.probs[word]), word


# Row-wise versions used by training and prediction


def binarize_rows(X: FloatArray, threshold: float) -> npt.NDArray[np.uint8]:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("empty instance")
    return (X >= threshold).astype(np.uint8)


def pad_rows(bits: npt.NDArray[np.uint8], n: int, pad_symbol: int = 1) -> npt.NDArray[np.uint8]:
    if n < 1:
        raise ValueError(f"word length must be >= 1, got {n}")
    remainder = bits.shape[1] % n
    if remainder == 0:
        return bits
    padding = np.full((bits.shape[0], n - remainder), pad_symbol, dtype=np.uint8)
    return np.hstack((bits, padding))


def word_rows(bits: npt.NDArray[np.uint8], n: int) -> IntArray:
    """(rows, bits/n) matrix of word values from a padded bit matrix."""
    if bits.shape[1] % n:
        raise ValueError("unpadded sequence")
    return bits.reshape(bits.shape[0], bits.shape[1] // n, n).astype(np.int64) @ _word_weights(n)


def count_rows(words: IntArray, n: int) -> IntArray:
    """(rows, 2^n) occurrence counts of every word in every row."""
    size = 1 << n
    rows = words.shape[0]
    offsets = words + (np.arange(rows, dtype=np.int64) * size)[:, None]
    return np.bincount(offsets.ravel(), minlength=rows * size).reshape(rows, size)


def symbolize_rows(X: FloatArray, threshold: float, n: int, pad_symbol: int = 1) -> IntArray:
    """Binarize, pad and cut every row of a scaled matrix into words."""
    words = word_rows(pad_rows(binarize_rows(X, threshold), n, pad_symbol), n)
    logger.debug(f"Symbolized {words.shape[0]} rows into {words.shape[1]} words of {n} bits")
    return words
