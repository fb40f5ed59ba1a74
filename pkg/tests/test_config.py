import pytest

from utils.config import DEFAULT_SETTINGS, LabSettings
from utils.exceptions import PreconditionError


def test_defaults():
    assert DEFAULT_SETTINGS.n_seed == 32
    assert DEFAULT_SETTINGS.tol_match == 1e-6
    assert DEFAULT_SETTINGS.margin == pytest.approx(2e-4)


def test_from_env_overrides():
    settings = LabSettings.from_env({"MORSELAB_N_SEED": "16", "MORSELAB_TOL_GRAD": "1e-9", "OTHER": "x"})
    assert settings.n_seed == 16
    assert isinstance(settings.n_seed, int)
    assert settings.tol_grad == 1e-9
    assert settings.h_hess == DEFAULT_SETTINGS.h_hess


def test_from_env_reads_process_environment(monkeypatch):
    monkeypatch.setenv("MORSELAB_N_JOBS", "2")
    assert LabSettings.from_env().n_jobs == 2


@pytest.mark.parametrize("env", [{"MORSELAB_N_SEED": "many"}, {"MORSELAB_H_GRAD": "0"}, {"MORSELAB_MAX_ITER": "2.5"}])
def test_from_env_rejects_bad_values(env):
    with pytest.raises(PreconditionError):
        LabSettings.from_env(env)
