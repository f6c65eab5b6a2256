from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


def fractions(max_den=8, bound=8):
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(-bound * max_den, bound * max_den),
        st.integers(1, max_den),
    )


def spins(bound=4):
    return st.integers(-2 * bound, 2 * bound).map(lambda j: Fraction(j, 2))


signs = st.sampled_from([1, -1])
