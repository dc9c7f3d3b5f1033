import pytest

from conftest import CONFIG_DIR
from kgraph_toolkit.core.errors import ConfigError
from kgraph_toolkit.geometry import DomainShape, LeafKind
from kgraph_toolkit.mce import GridKind
from kgraph_toolkit.specs import ConfigValidator, RunConfig
from kgraph_toolkit.specs.schema import OutputFormat


class TestYamlConfigs:

    def test_hemisphere(self, hemisphere_config):
        config = ConfigValidator.validate_dict(hemisphere_config)
        assert isinstance(config, RunConfig)
        assert config.model.leaf == LeafKind.EUCLIDEAN_POLAR
        assert config.domain.shape == DomainShape.DISC
        assert config.build_H() == -1.0
        assert config.problem.exact.build().is_radial
        assert config.solver.grid == GridKind.RADIAL

    def test_defaults(self):
        config = ConfigValidator.validate_dict({
            "model": {"leaf": "euclidean-polar"},
            "domain": {"shape": "disc", "r0": 1.0},
        })
        assert config.problem.H == 0.0
        assert config.solver.m == 64
        assert config.solver.tol == 1e-10
        assert config.solver.mms_sizes == [32, 64, 128]
        assert config.output.formats == [OutputFormat.CSV, OutputFormat.TXT]
        assert config.logging.level == "INFO"
        assert config.build_domain().phi.is_zero

    def test_solver_options(self, hemisphere_config):
        hemisphere_config["solver"].update({"tol": 1e-9, "max_iter": 12, "dsigma": 0.05})
        solver = ConfigValidator.validate_dict(hemisphere_config).solver
        assert solver.newton_options().tol == 1e-9
        assert solver.newton_options().max_iter == 12
        assert solver.homotopy_options().dsigma == 0.05
        assert solver.homotopy_options().newton.max_iter == 12

    def test_file_roundtrip(self, hemisphere_config, write_config, tmp_path):
        config = ConfigValidator.validate_file(write_config(hemisphere_config))
        ConfigValidator.save_yaml(config, tmp_path / "saved.yaml")
        assert ConfigValidator.validate_file(tmp_path / "saved.yaml") == config

    def test_log_level_is_case_insensitive(self, hemisphere_config):
        hemisphere_config["logging"]["level"] = "debug"
        assert ConfigValidator.validate_dict(hemisphere_config).logging.level == "DEBUG"

    @pytest.mark.parametrize("name", sorted(p.name for p in CONFIG_DIR.glob("*.yaml")))
    def test_shipped_examples_validate(self, name):
        ConfigValidator.validate_file(CONFIG_DIR / name)


class TestIniConfigs:

    def test_shipped_example(self):
        config = ConfigValidator.validate_file(CONFIG_DIR / "theorem3.ini")
        assert config.problem.theorem == 3
        assert config.problem.H == -0.9
        assert config.model.rho.name == "constant"
        assert config.model.rho.value == 1.0
        assert config.output.formats == [OutputFormat.TXT]

    def test_flat_function_parameters(self, tmp_path):
        path = tmp_path / "warped.ini"
        path.write_text(
            "[model]\n"
            "leaf = rotsym\n"
            "xi = sinh\n"
            "xi_k = 2.0\n"
            "rho = cosh\n"
            "\n"
            "[domain]\n"
            "shape = disc\n"
            "r0 = 0.5  # inline comment\n"
            "\n"
            "[problem]\n"
            "exact = exp_bump\n"
            "exact_amplitude = 0.2\n"
            "\n"
            "[solver]\n"
            "homotopy = no\n"
            "mms_sizes = 16, 32, 64\n",
            encoding="utf-8",
        )
        config = ConfigValidator.validate_file(path)
        assert config.model.xi.k == 2.0
        assert config.model.rho.name == "cosh"
        assert config.domain.r0 == 0.5
        assert config.problem.exact.amplitude == 0.2
        assert config.solver.homotopy is False
        assert config.solver.mms_sizes == [16, 32, 64]

    def test_parameters_without_a_function(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[model]\nleaf = euclidean-polar\nxi_k = 2.0\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="does not name a function"):
            ConfigValidator.load(path)


class TestInvalidConfigs:

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            ConfigValidator.validate_file(tmp_path / "absent.yaml")

    def test_unsupported_suffix(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{}", encoding="utf-8")
        with pytest.raises(ConfigError, match="Unsupported"):
            ConfigValidator.validate_file(path)

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("model: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="Invalid YAML"):
            ConfigValidator.load(path)

    def test_yaml_must_be_a_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- model\n- domain\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            ConfigValidator.load(path)

    def test_missing_model(self, hemisphere_config):
        del hemisphere_config["model"]
        errors = ConfigValidator.get_validation_errors(hemisphere_config)
        assert any(error.startswith("model") for error in errors)
        with pytest.raises(ConfigError) as info:
            ConfigValidator.validate_dict(hemisphere_config)
        assert info.value.errors == errors

    def test_valid_config_has_no_errors(self, hemisphere_config):
        assert ConfigValidator.get_validation_errors(hemisphere_config) == []

    @pytest.mark.parametrize("section,key,value", [
        ("model", "leaf", "spherical"),
        ("model", "n", 1),
        ("domain", "r0", -1.0),
        ("solver", "m", 4),
        ("solver", "tol", 0.0),
        ("solver", "mms_sizes", [32]),
        ("solver", "mms_sizes", [64, 32]),
        ("solver", "dsigma", 0.5),
        ("logging", "level", "LOUD"),
    ])
    def test_invalid_values(self, hemisphere_config, section, key, value):
        hemisphere_config[section][key] = value
        assert ConfigValidator.get_validation_errors(hemisphere_config)

    def test_unknown_function(self, hemisphere_config):
        hemisphere_config["model"]["rho"] = {"name": "tanh"}
        errors = ConfigValidator.get_validation_errors(hemisphere_config)
        assert any("Unknown function" in error for error in errors)

    def test_rotsym_needs_xi(self):
        errors = ConfigValidator.get_validation_errors({
            "model": {"leaf": "rotsym"},
            "domain": {"shape": "disc", "r0": 1.0},
        })
        assert any("xi" in error for error in errors)

    def test_disc_needs_radius(self, hemisphere_config):
        del hemisphere_config["domain"]["r0"]
        assert ConfigValidator.get_validation_errors(hemisphere_config)

    def test_radial_grid_needs_radial_data(self, hemisphere_config):
        hemisphere_config["domain"]["phi"] = {"name": "r2_cos_theta", "amplitude": 0.1}
        errors = ConfigValidator.get_validation_errors(hemisphere_config)
        assert any("radial grids need radial fields" in error for error in errors)

    def test_leaf_and_domain_must_match(self, hemisphere_config):
        hemisphere_config["model"] = {"leaf": "cartesian-flat"}
        assert ConfigValidator.get_validation_errors(hemisphere_config)

    def test_cartesian_grid_needs_a_rectangle(self, hemisphere_config):
        hemisphere_config["solver"]["grid"] = "cartesian"
        errors = ConfigValidator.get_validation_errors(hemisphere_config)
        assert any("rectangle" in error for error in errors)

    def test_polar_grid_is_two_dimensional(self, hemisphere_config):
        hemisphere_config["model"] = {"leaf": "rotsym", "n": 3, "xi": {"name": "sinh"}}
        hemisphere_config["solver"]["grid"] = "polar"
        errors = ConfigValidator.get_validation_errors(hemisphere_config)
        assert any("n = 2" in error for error in errors)
