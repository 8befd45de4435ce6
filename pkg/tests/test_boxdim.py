import math

import numpy as np
import pytest

from fibtrace import boxdim
from fibtrace.intervals import BandSet


def test_box_count_conventions():
    unit = BandSet([(0.0, 1.0)])
    assert boxdim.box_count(unit, 0.1) == 10
    assert boxdim.box_count(unit, 1.0) == 1
    # a point counts one box
    assert boxdim.box_count(BandSet([(0.3, 0.3)]), 0.1) == 1
    # touching a grid line from outside does not add a box
    assert boxdim.box_count(BandSet([(0.1, 0.2)]), 0.1) == 1


def test_box_count_merges_shared_boxes():
    b = BandSet([(0.01, 0.02), (0.08, 0.09)])  # both inside box 0
    assert boxdim.box_count(b, 0.1) == 1


def test_box_count_rejects_bad_input():
    with pytest.raises(ValueError):
        boxdim.box_count(BandSet([(0.0, 1.0)]), 0.0)
    with pytest.raises(ValueError):
        boxdim.box_count(BandSet([]), 0.1)


def test_unit_interval_has_dimension_one():
    est = boxdim.box_dimension(
        BandSet([(0.0, 1.0)]), boxdim.geometric_scales(0.25, n=8)
    )
    assert abs(est.value - 1.0) < 0.01
    assert not est.flagged


def test_cantor_middle_thirds():
    bands = boxdim.cantor_bands(1.0 / 3.0, 10)
    # shift keeps construction endpoints off the counting lattice
    shifted = BandSet(
        [(lo + 1.0 / 7.0, hi + 1.0 / 7.0) for lo, hi in bands.intervals]
    )
    grid = boxdim.geometric_scales(1.0 / 3.0, ratio=1.0 / 3.0, n=8)
    est = boxdim.box_dimension(shifted, grid)
    assert abs(est.value - math.log(2) / math.log(3)) < 0.02
    # the generic binary grid oscillates but stays in range
    loose = boxdim.box_dimension(bands, boxdim.auto_scale_grid(bands))
    assert abs(loose.value - math.log(2) / math.log(3)) < 0.05


def test_cantor_quarter_ratio():
    bands = boxdim.cantor_bands(0.25, 10)
    est = boxdim.box_dimension(bands, boxdim.auto_scale_grid(bands))
    assert abs(est.value - 0.5) < 0.02


def test_scale_grid_validation():
    b = boxdim.cantor_bands(1.0 / 3.0, 8)
    with pytest.raises(ValueError):
        boxdim.box_dimension(b, [0.1, 0.09, 0.08, 0.07, 0.06])  # not geometric
    with pytest.raises(ValueError):
        boxdim.box_dimension(b, [0.1, 0.05, 0.025])  # too few scales
    with pytest.raises(ValueError):
        # all scales below the resolution floor
        boxdim.box_dimension(b, boxdim.geometric_scales(1e-7, n=5))
    with pytest.raises(ValueError):
        boxdim.geometric_scales(0.1, ratio=0.7)


def test_local_dimension_window():
    b = boxdim.cantor_bands(1.0 / 3.0, 10)
    est = boxdim.local_dimension(b, (0.0, 1.0 / 3.0), boxdim.auto_scale_grid(b))
    assert abs(est.value - math.log(2) / math.log(3)) < 0.05
    with pytest.raises(ValueError):
        boxdim.local_dimension(b, (0.4, 0.45), boxdim.auto_scale_grid(b))


def test_residual_flag():
    est = boxdim.DimensionEstimate(
        value=0.5, scale_range=(0.1, 0.01), regression_residual=0.2, counts=[]
    )
    assert est.flagged


def test_cantor_bands_validation():
    with pytest.raises(ValueError):
        boxdim.cantor_bands(0.6, 3)
    with pytest.raises(ValueError):
        boxdim.cantor_bands(0.3, -1)
    # three maps of ratio 1/5: dimension log 3 / log 5
    b = boxdim.cantor_bands(0.2, 8, maps=3)
    est = boxdim.box_dimension(b, boxdim.auto_scale_grid(b))
    assert abs(est.value - math.log(3) / math.log(5)) < 0.03


def test_asymptote_check_requires_large_coupling():
    with pytest.raises(ValueError):
        boxdim.asymptote_check([8.0], 8)


def test_asymptote_check_single_value():
    rows = boxdim.asymptote_check([16.0], 8)
    assert len(rows) == 1
    r = rows[0]
    assert 0.5 < r["dim_log_V"] < 1.3
    assert r["level"] <= 8 and np.isfinite(r["residual"])
