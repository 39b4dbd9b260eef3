import numpy as np
import pytest

from evomarket.market import MarketStructure


@pytest.fixture
def market():
    return MarketStructure(upper_share=0.03, minimum_price=0.05, width=0.4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
