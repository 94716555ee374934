"""Reference xoshiro256** / SplitMix64 / Box-Muller stream, written independently
of the C++ code. Prints the known-answer vectors listed in docs/rng.md."""
import math

MASK = (1 << 64) - 1


def splitmix64(state):
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        yield z ^ (z >> 31)


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK


def xoshiro(seed):
    sm = splitmix64(seed)
    s = [next(sm) for _ in range(4)]
    while True:
        result = (rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        yield result


def normals(seed):
    g = xoshiro(seed)
    while True:
        u1 = 1.0 - (next(g) >> 11) * 2.0 ** -53
        u2 = (next(g) >> 11) * 2.0 ** -53
        r = math.sqrt(-2.0 * math.log(u1))
        a = 2.0 * math.pi * u2
        yield r * math.cos(a)
        yield r * math.sin(a)


if __name__ == "__main__":
    for seed in (0, 42):
        g = normals(seed)
        print(seed, [repr(next(g)) for _ in range(10)])
    u = xoshiro(42)
    print("raw42", [hex(next(u)) for _ in range(3)])
