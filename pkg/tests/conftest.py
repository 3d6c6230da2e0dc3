import pytest

import knotforge as kf


@pytest.fixture(scope="session")
def trefoil_long():
    return kf.catalog_get("trefoil-long")


@pytest.fixture(scope="session")
def trefoil_arc():
    return kf.arc_from_curve(kf.catalog_get("trefoil-arc"))


@pytest.fixture(scope="session")
def twist_arc():
    return kf.arc_from_curve(kf.catalog_get("trefoil-twist-arc"))


@pytest.fixture(scope="session")
def fig8_arc():
    return kf.arc_from_curve(kf.catalog_get("figure8-arc"))


@pytest.fixture(scope="session")
def torus27():
    return kf.catalog_get("torus-2-7")


@pytest.fixture(scope="session")
def canonical_trefoil(trefoil_long):
    # height convention for long 2-knots: odd-degree coordinate last
    return kf.swap_yz(trefoil_long)


@pytest.fixture(scope="session")
def k21_diagram(torus27):
    return kf.weldify(torus27, [2, 4])
