import pytest

from liyorke import certify, logistic_example, synthesize, validate


@pytest.fixture(scope="session")
def ones():
    return validate([[1, 1], [1, 1]])


@pytest.fixture(scope="session")
def golden():
    return validate([[0, 1], [1, 1]])


@pytest.fixture(scope="session")
def example():
    return logistic_example()


@pytest.fixture(scope="session")
def cert42(example, ones):
    return certify(example, ones, "T42", 2)


@pytest.fixture(scope="session")
def points42(example, cert42):
    return synthesize(cert42, example, 8, 1e-10)
