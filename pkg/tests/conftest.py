from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from qdeform.qcore import QParam

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

TEST_QS = [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 2), Fraction(2), Fraction(5, 2)]


def rational_q(min_value=Fraction(1, 10), max_value=Fraction(5), max_denominator=12):
    """Positive rationals with small denominators, including q = 1."""
    return st.fractions(min_value=min_value, max_value=max_value, max_denominator=max_denominator).filter(lambda q: q > 0)


def exact_qparams(**kw):
    return rational_q(**kw).map(QParam.exact)


@pytest.fixture(params=TEST_QS, ids=lambda q: f"q={q}")
def qp(request):
    return QParam.exact(request.param)
