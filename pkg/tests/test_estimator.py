import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from eikdg import EikonalDG, SolveSettings
from eikdg.mesh import gen_annulus


@pytest.fixture(scope="module")
def fitted():
    est = EikonalDG(order=3, g1_mode="off", settings=SolveSettings(tol=1e-12))
    return est.fit(gen_annulus(3, 6, 0.5, 10.0, 4))


def test_params_and_clone():
    est = EikonalDG(order=3, c=0.5)
    params = est.get_params()
    assert params["order"] == 3 and params["c"] == 0.5
    twin = clone(est)
    assert twin.get_params() == params and not hasattr(twin, "field_")
    assert est.set_params(c=0.1).c == 0.1


def test_predict_distance(fitted):
    assert fitted.converged_ and fitted.n_dof_ == 18 * 9
    r = np.array([0.7, 2.0, 5.0, 9.0])
    pts = np.c_[r * np.cos(1.0), r * np.sin(1.0)]
    s = fitted.predict(pts)
    assert s.shape == (4,)
    np.testing.assert_allclose(s, r - 0.5, rtol=2e-2, atol=2e-2)
    q = fitted.predict_gradient(pts)
    np.testing.assert_allclose(np.hypot(q[:, 0], q[:, 1]), 1.0, atol=3e-2)
    assert np.all(fitted.viscosity() == 0.0)


def test_input_validation(fitted):
    with pytest.raises(NotFittedError):
        EikonalDG().predict([[1.0, 0.0]])
    with pytest.raises(TypeError):
        EikonalDG().fit("mesh")
    with pytest.raises(ValueError):
        EikonalDG(order=1).fit(gen_annulus(2, 4, 0.5, 2.0, 2))
    with pytest.raises(ValueError):
        fitted.predict([[1.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        fitted.predict([[np.nan, 1.0]])
    with pytest.raises(ValueError):
        EikonalDG(order=2).fit(gen_annulus(2, 4, 0.5, 2.0, 3), initial=np.zeros((1, 2, 2, 3)))
