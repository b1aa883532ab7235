import math

import pytest

from sparse_isp.config import experiment_from_text
from sparse_isp.errors import InvalidParameterError, OutOfBoxError
from sparse_isp.model import MultipolarSource, SourceComponent, build_lattice
from sparse_isp.pipeline import Experiment, cell_seeds, reference_image, run_cell

SMALL = 'lattice.N = 6\nsource.monopole = "3 2 9"\nsource.dipole = "-3 -2 1 -1"\nimage.resolution = 32\n' \
        'aloha.rank = 4\naloha.iters = 40\nl1.iters = 200\n'


@pytest.fixture(scope="module")
def small():
    return experiment_from_text(SMALL)


def test_cell_seeds_distinct_and_stable():
    a, b = cell_seeds(5)
    assert a != b and cell_seeds(5) == (a, b)


def test_experiment_validation():
    lat = build_lattice(12.0, 6, 1e-3)
    src = MultipolarSource([SourceComponent.monopole(0, 0, 1)])
    with pytest.raises(InvalidParameterError):
        Experiment(src, lat, resolution=12)
    with pytest.raises(InvalidParameterError):
        Experiment(src, lat, completion_domain="pixels")
    with pytest.raises(OutOfBoxError):
        Experiment(MultipolarSource([SourceComponent.monopole(9, 0, 1)]), lat)


def test_reference_reports_zero_mode_diagnostic(small):
    img = reference_image(small)
    assert img.meta["zero_mode_correction"] >= 0


@pytest.mark.parametrize("method", ["none", "l1cs", "aloha"])
def test_run_cell(small, method):
    out = run_cell(small, method, 0.4, 10.0, 3)
    assert out.image.pixels.shape == (32, 32)
    assert math.isfinite(out.psnr_db) and -1 <= out.ssim <= 1
    assert out.wall_seconds >= 0
    again = run_cell(small, method, 0.4, 10.0, 3)
    assert again.psnr_db == out.psnr_db


def test_unknown_method(small):
    with pytest.raises(ValueError):
        run_cell(small, "magic", 0.4)
