"""Toy block ciphers with 16-bit keys and blocks.

``xor16``
    ``E(k, x) = x ^ k``.

``spn16``
    Two rounds of key mixing, a 4-bit S-box on each nibble, and a bit
    permutation. Round keys are ``k`` and ``rotl16(k, 8)``.

    S-box (input nibble -> output nibble)::

        0 1 2 3 4 5 6 7 8 9 A B C D E F
        E 4 D 1 2 F B 8 3 A 6 C 5 9 0 7

    Permutation: bit ``i`` (0 = least significant) moves to bit
    ``4 * (i % 4) + i // 4``, i.e. the 4x4 bit matrix is transposed.

Both functions accept Python ints or integer numpy arrays for either argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgument

__all__ = ["SBOX", "PBOX", "ToyCryptosystem", "make_cipher", "CIPHERS"]

SBOX = (0xE, 0x4, 0xD, 0x1, 0x2, 0xF, 0xB, 0x8, 0x3, 0xA, 0x6, 0xC, 0x5, 0x9, 0x0, 0x7)
PBOX = tuple(4 * (i % 4) + i // 4 for i in range(16))

_MASK16 = 0xFFFF


def _word_table(nibble_map):
    words = np.arange(1 << 16, dtype=np.int64)
    out = np.zeros_like(words)
    table = np.asarray(nibble_map, dtype=np.int64)
    for shift in (0, 4, 8, 12):
        out |= table[(words >> shift) & 0xF] << shift
    return out


def _perm_table(pbox):
    words = np.arange(1 << 16, dtype=np.int64)
    out = np.zeros_like(words)
    for i, j in enumerate(pbox):
        out |= ((words >> i) & 1) << j
    return out


_INV_SBOX = tuple(SBOX.index(v) for v in range(16))
_INV_PBOX = tuple(PBOX.index(v) for v in range(16))
_S = _word_table(SBOX)
_S_INV = _word_table(_INV_SBOX)
_P = _perm_table(PBOX)
_P_INV = _perm_table(_INV_PBOX)


def _rotl16(k, r):
    return ((k << r) | (k >> (16 - r))) & _MASK16


def _unwrap(result, *args):
    if all(np.ndim(a) == 0 for a in args):
        return int(result)
    return result


def _spn_encrypt(key, block):
    k = np.asarray(key, dtype=np.int64)
    x = np.asarray(block, dtype=np.int64)
    for rk in (k, _rotl16(k, 8)):
        x = _P[_S[x ^ rk]]
    return _unwrap(x, key, block)


def _spn_decrypt(key, block):
    k = np.asarray(key, dtype=np.int64)
    y = np.asarray(block, dtype=np.int64)
    for rk in (_rotl16(k, 8), k):
        y = _S_INV[_P_INV[y]] ^ rk
    return _unwrap(y, key, block)


def _xor_encrypt(key, block):
    return _unwrap(np.bitwise_xor(np.asarray(key, dtype=np.int64), np.asarray(block, dtype=np.int64)), key, block)


@dataclass(frozen=True)
class ToyCryptosystem:
    name: str
    key_bits: int
    block_bits: int
    encrypt: Callable
    decrypt: Callable

    @property
    def key_space(self):
        return 1 << self.key_bits


CIPHERS = {
    "xor16": lambda: ToyCryptosystem("xor16", 16, 16, _xor_encrypt, _xor_encrypt),
    "spn16": lambda: ToyCryptosystem("spn16", 16, 16, _spn_encrypt, _spn_decrypt),
}


def make_cipher(name):
    try:
        return CIPHERS[name]()
    except KeyError:
        raise InvalidArgument(f"unknown cipher {name!r}; choose from {sorted(CIPHERS)}") from None
