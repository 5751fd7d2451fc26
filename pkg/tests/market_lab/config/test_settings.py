"""Tests for the lab settings."""

import pytest
from pydantic import ValidationError

from market_lab.config.settings import LabSettings, get_lab_settings


@pytest.fixture(autouse=True)
def clear_settings_cache():
    get_lab_settings.cache_clear()
    yield
    get_lab_settings.cache_clear()


@pytest.mark.unit
class TestLabSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("MARKET_LAB_DENSE_ENUMERATION_MAX_COLUMNS", raising=False)
        settings = LabSettings(_env_file=None)

        assert settings.dense_enumeration_max_columns == 20
        assert settings.search_node_budget == 10_000_000
        assert settings.multinomial_composition_cap == 10_000_000
        assert settings.cone_min_conditioned_fraction == 1e-4
        assert settings.cone_min_ratio == 0.01
        assert (settings.default_alpha, settings.default_initial_price) == ("1", "100")
        assert (settings.svg_width, settings.svg_height) == (1000, 500)

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("MARKET_LAB_SEARCH_NODE_BUDGET", "1234")
        monkeypatch.setenv("MARKET_LAB_LOG_LEVEL", "DEBUG")

        settings = LabSettings(_env_file=None)

        assert settings.search_node_budget == 1234
        assert settings.log_level == "DEBUG"

    def test_dense_cap_is_bounded(self):
        with pytest.raises(ValidationError):
            LabSettings(_env_file=None, dense_enumeration_max_columns=26)

    def test_cone_floor_must_be_a_fraction(self):
        with pytest.raises(ValidationError):
            LabSettings(_env_file=None, cone_min_conditioned_fraction=1.5)

    @pytest.mark.parametrize("ratio", [0.0, 1.0])
    def test_ratio_floor_must_lie_strictly_inside_the_unit_interval(self, ratio):
        with pytest.raises(ValidationError):
            LabSettings(_env_file=None, cone_min_ratio=ratio)

    def test_accessor_is_cached(self):
        assert get_lab_settings() is get_lab_settings()
