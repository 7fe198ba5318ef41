import pytest

from kmspectral import Family, figure_models


def all_figure_models():
    return [m for f in Family for m in figure_models(f)]


def model_id(m):
    return m.describe()


@pytest.fixture(params=all_figure_models(), ids=model_id)
def figure_model(request):
    return request.param
