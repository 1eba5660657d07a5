import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from kmtheta.errors import IncidenceError
from kmtheta.estimator import SurfaceIntegralTransformer
from kmtheta.geometry import surface_integral_phi
from kmtheta.theta import closed_form_I


@pytest.fixture
def est(fixture22):
    c = fixture22.config
    return SurfaceIntegralTransformer(gram=fixture22.V.gram, C1=c.C1, C2=c.C2, C1p=c.C1p, C2p=c.C2p)


def test_transform_matches_closed_form(est, config, chart, rng):
    X = rng.uniform(-2, 2, (6, 4))
    out = est.fit(X).transform(X)
    assert out.shape == (6, 1)
    for y, v in zip(X, out[:, 0]):
        assert v == pytest.approx(closed_form_I(y, config), abs=1e-10)
        assert v == pytest.approx(surface_integral_phi(y, chart), abs=1e-8)


def test_params_and_clone(est):
    p = est.get_params()
    assert set(p) == {"gram", "C1", "C2", "C1p", "C2p", "special_tol"}
    c = clone(est).set_params(special_tol=1e-10)
    assert c.special_tol == 1e-10 and est.special_tol == 1e-12
    assert not hasattr(c, "config_")


def test_not_fitted_and_shape_errors(est):
    with pytest.raises(NotFittedError):
        est.transform(np.zeros((1, 4)))
    est.fit()
    with pytest.raises(ValueError):
        est.transform(np.zeros((2, 3)))


def test_fit_rejects_bad_configuration(est):
    with pytest.raises(IncidenceError):
        clone(est).set_params(C1p=est.C1).fit()


def test_pipeline(est, rng):
    X = rng.uniform(-1, 1, (4, 4))
    pipe = make_pipeline(FunctionTransformer(lambda Z: 2 * Z), est)
    assert np.allclose(pipe.fit_transform(X), clone(est).fit(X).transform(2 * X), atol=0)
