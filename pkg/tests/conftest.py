import pytest

from superschur import operator_basis, super_schur_basis


@pytest.fixture(scope="session")
def schur_2_2():
    return super_schur_basis(2, 2)


@pytest.fixture(scope="session")
def schur_2_3():
    return super_schur_basis(2, 3)


@pytest.fixture(scope="session")
def schur_2_4():
    return super_schur_basis(2, 4)


@pytest.fixture(scope="session")
def schur_3_2():
    return super_schur_basis(3, 2)


@pytest.fixture(scope="session")
def letters_2_3():
    return operator_basis(2, 3)


@pytest.fixture(scope="session")
def letters_2_2():
    return operator_basis(2, 2)
