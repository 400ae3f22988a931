import hashlib

import numpy as np
from Crypto.Cipher import AES

BLOCK_SIZE = 16
# 2^-53, spacing of doubles in [0.5, 1)
UNIT = 1.0 / (1 << 53)


def derive_key(master_seed: int, system_id: str, run_index: int, tag: str) -> bytes:
    """
    128 bit stream key, the leading bytes of SHA-256 over the stream coordinates.

    Args:
        master_seed (int): 64 bit experiment seed
        system_id (str): system identifier
        run_index (int): Monte Carlo run
        tag (str): stream tag (noise channel)
    Returns:
        (bytes) 16 byte AES key
    """
    digest = hashlib.sha256()
    digest.update((master_seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, 'big'))
    digest.update(system_id.encode('utf-8'))
    digest.update(b'\x00')
    digest.update(int(run_index).to_bytes(8, 'big'))
    digest.update(tag.encode('utf-8'))
    return digest.digest()[:BLOCK_SIZE]


def encrypt_blocks(key: bytes, first: int, count: int) -> bytes:
    """
    AES-128 of the big endian 128 bit counters first .. first + count - 1.
    """
    counters = b''.join((first + i).to_bytes(BLOCK_SIZE, 'big') for i in range(count))
    return AES.new(key, AES.MODE_ECB).encrypt(counters)


def uniforms_from_bytes(stream: bytes) -> np.ndarray:
    """
    Doubles in (0, 1) from consecutive big endian 64 bit words: ((w >> 11) + 0.5) 2^-53.
    """
    words = np.frombuffer(stream, dtype='>u8').astype(np.uint64)
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * UNIT


def box_muller(uniforms: np.ndarray) -> np.ndarray:
    """
    Standard normals from consecutive uniform pairs (u1, u2): sqrt(-2 ln u1) cos(2 pi u2)
    followed by sqrt(-2 ln u1) sin(2 pi u2).
    """
    assert uniforms.size % 2 == 0, 'Box-Muller needs an even number of uniforms'
    u1 = uniforms[0::2]
    u2 = uniforms[1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    normals = np.empty_like(uniforms)
    normals[0::2] = radius * np.cos(2 * np.pi * u2)
    normals[1::2] = radius * np.sin(2 * np.pi * u2)
    return normals


class CounterStream(object):
    """
    Counter based pseudorandom stream: block i is AES_key(i). Streams with different
    keys are independent, and any stream can be regenerated from its key alone.
    """

    def __init__(self, key: bytes):
        assert len(key) == BLOCK_SIZE, 'AES-128 key required'
        self._key = key
        self._counter = 0

    @classmethod
    def for_coordinates(cls, master_seed: int, system_id: str, run_index: int, tag: str) -> 'CounterStream':
        return cls(derive_key(master_seed, system_id, run_index, tag))

    @property
    def counter(self) -> int:
        return self._counter

    def uniforms(self, count: int) -> np.ndarray:
        if count <= 0:
            return np.empty(0)
        # two words per block; an odd count leaves the last word unused
        blocks = (count + 1) // 2
        stream = encrypt_blocks(self._key, self._counter, blocks)
        self._counter += blocks
        return uniforms_from_bytes(stream)[:count]

    def normals(self, count: int) -> np.ndarray:
        return box_muller(self.uniforms(count + count % 2))[:count]
