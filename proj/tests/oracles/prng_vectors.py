"""Reference outputs for SplitMix64 / xoshiro256** and the row-major sampler.

Written straight from the published reference C code; run with python3.
"""

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


def derive_seed(seed, stream):
    return next(splitmix64(seed ^ ((0x6A09E667F3BCC909 * (stream + 1)) & MASK)))


def uniform(gen):
    return (next(gen) >> 11) * 2.0**-53


def sample_source(q, s, rows, cols, seed):
    gen = xoshiro(seed)
    out = []
    for r in range(rows):
        for c in range(cols):
            u = uniform(gen)
            if u < s:
                continue
            k = min(int((u - s) / (1 - s) * (q - 1)), q - 2)
            out.append((r, c, k + 1))
    return out


if __name__ == "__main__":
    sm = splitmix64(0)
    print("splitmix64(0):", [hex(next(sm)) for _ in range(3)])
    g = xoshiro(42)
    print("xoshiro(42):", [hex(next(g)) for _ in range(4)])
    print("derive_seed(7, 0..2):", [hex(derive_seed(7, i)) for i in range(3)])
    print("sample q=7 s=0.5 3x4 seed=11:", sample_source(7, 0.5, 3, 4, 11))
