"""
Configuration and Template Table Tests
Environment settings, validation warnings and the versioned template tables
"""

import json
import shutil

import pytest
from pydantic import ValidationError

from signedflow.config import (
    PACKAGE_DATA_DIR,
    get_data_settings,
    get_search_settings,
    get_settings,
    load_settings,
    use_settings,
    validate_settings,
)
from signedflow.core.templates import (
    HAMILTONIAN_FILE,
    LADDER_FILE,
    hamiltonian_template,
    ladder_template,
    ladder_template_names,
)
from signedflow.exceptions import ParseError, SignedFlowError

pytestmark = pytest.mark.unit


@pytest.fixture
def template_copy(tmp_path, monkeypatch):
    """A writable copy of the shipped tables, selected through SFF_DATA_DIR"""
    shutil.copytree(PACKAGE_DATA_DIR / "templates", tmp_path / "templates")
    monkeypatch.setenv("SFF_DATA_DIR", str(tmp_path))
    return tmp_path / "templates"


class TestSettings:
    """Tests for the settings layer"""

    def test_defaults(self):
        settings = get_settings()
        assert settings.search.budget_nodes == 2_000_000
        assert settings.search.kmax == 8
        assert not settings.search.allow_search_fallback
        assert settings.run.log_level == "info"

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("SFF_KMAX", "6")
        monkeypatch.setenv("SFF_THREADS", "4")
        assert get_search_settings().kmax == 6
        assert get_settings().run.threads == 4

    def test_settings_are_cached(self, monkeypatch):
        first = get_settings()
        monkeypatch.setenv("SFF_KMAX", "5")
        assert get_settings() is first
        load_settings.cache_clear()
        assert get_settings().search.kmax == 5

    @pytest.mark.parametrize("name, value", [("SFF_LOG_LEVEL", "loud"), ("SFF_KMAX", "1")])
    def test_invalid_values_rejected(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ValidationError):
            get_settings()

    def test_log_level_normalized(self, monkeypatch):
        monkeypatch.setenv("SFF_LOG_LEVEL", "DEBUG")
        assert get_settings().run.log_level == "debug"

    def test_overrides_build_a_copy(self):
        base = get_settings()
        tuned = base.with_overrides(search={"kmax": 5}, run={"seed": 9})
        assert (tuned.search.kmax, tuned.run.seed) == (5, 9)
        assert (base.search.kmax, base.run.seed) == (8, 0)
        assert tuned.search.budget_nodes == base.search.budget_nodes

    def test_overrides_are_validated(self):
        with pytest.raises(ValidationError):
            get_settings().with_overrides(search={"kmax": 40})

    def test_use_settings_is_scoped(self):
        tuned = get_settings().with_overrides(run={"threads": 3})
        with use_settings(tuned):
            assert get_settings() is tuned
        assert get_settings() is load_settings()
        assert get_settings().run.threads == 1


class TestValidateSettings:
    """Tests for validate_settings"""

    def test_clean_defaults(self):
        assert validate_settings() == []

    def test_missing_template_directory(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SFF_DATA_DIR", str(tmp_path / "nowhere"))
        issues = validate_settings()
        assert any(i.startswith("CRITICAL") for i in issues)

    def test_warnings(self, monkeypatch):
        monkeypatch.setenv("SFF_ALLOW_SEARCH_FALLBACK", "1")
        monkeypatch.setenv("SFF_BUDGET_NODES", "500")
        issues = validate_settings()
        assert len(issues) == 2
        assert all(i.startswith("WARNING") for i in issues)


class TestTemplateTables:
    """Tests for loading the ladder and Hamiltonian tables"""

    def test_shipped_tables(self):
        assert ladder_template_names() == (
            "negative-cycles-n2",
            "negative-cycles-n4",
            "negative-cycles-n6",
            "positive-cycles-n4",
            "positive-cycles-n6",
        )
        assert hamiltonian_template("crossing").k == 3
        assert hamiltonian_template("parallel").cyclic_order == ["u1", "v1", "v2", "u2"]

    def test_ladder_template_rows(self):
        template = ladder_template("negative-cycles-n4")
        assert template.k == 6
        assert template.extender.position == 3
        assert ladder_template("negative-cycles-n2").extender is None

    def test_unknown_template(self):
        with pytest.raises(SignedFlowError) as excinfo:
            ladder_template("positive-cycles-n8")
        assert "positive-cycles-n4" in excinfo.value.details["known"]
        with pytest.raises(SignedFlowError):
            hamiltonian_template("diagonal")

    def test_data_dir_from_environment(self, template_copy):
        assert get_data_settings().templates_dir == template_copy
        assert len(ladder_template_names()) == 5

    def test_version_mismatch(self, template_copy, monkeypatch):
        monkeypatch.setenv("SFF_TEMPLATE_VERSION", "2")
        with pytest.raises(ParseError) as excinfo:
            ladder_template_names()
        assert "expected 2" in excinfo.value.reason

    def test_bumped_version_accepted(self, template_copy, monkeypatch):
        for name in (LADDER_FILE, HAMILTONIAN_FILE):
            path = template_copy / name
            data = json.loads(path.read_text(encoding="utf-8"))
            data["version"] = 2
            path.write_text(json.dumps(data), encoding="utf-8")
        monkeypatch.setenv("SFF_TEMPLATE_VERSION", "2")
        assert hamiltonian_template("crossing").k == 3

    def test_missing_table(self, template_copy):
        (template_copy / HAMILTONIAN_FILE).unlink()
        with pytest.raises(ParseError) as excinfo:
            ladder_template_names()
        assert excinfo.value.reason == "template table not found"

    def test_invalid_row(self, template_copy):
        path = template_copy / LADDER_FILE
        data = json.loads(path.read_text(encoding="utf-8"))
        data["ladder"][0]["signs"]["rung"].append(1)
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(ParseError):
            ladder_template_names()

    def test_broken_json(self, template_copy):
        (template_copy / LADDER_FILE).write_text("{", encoding="utf-8")
        with pytest.raises(ParseError):
            ladder_template_names()
