import pytest
from hypothesis import settings

from lmodel.collide import detect_all
from lmodel.families import Dixon1Params, Dixon2Params, dixon1, dixon2, s2

from expected import DIXON1_REF_KW

# deterministic example generation: no cross-run flakes in numeric properties
settings.register_profile("det", deadline=None, derandomize=True)
settings.load_profile("det")

REF_DIXON2 = Dixon2Params(1.0, 2.0, 3.0)


@pytest.fixture(scope="session")
def ref_dixon1():
    return dixon1(Dixon1Params(**DIXON1_REF_KW))


@pytest.fixture(scope="session")
def ref_dixon1_result(ref_dixon1):
    return detect_all(ref_dixon1)


@pytest.fixture(scope="session")
def ref_s2():
    return s2()


@pytest.fixture(scope="session")
def ref_s2_result(ref_s2):
    return detect_all(ref_s2)


@pytest.fixture(scope="session")
def ref_dixon2():
    return dixon2(REF_DIXON2)


@pytest.fixture(scope="session")
def ref_dixon2_result(ref_dixon2):
    return detect_all(ref_dixon2)
