import pathlib
import tempfile

import numpy as np
import pytest

from collabdiv.sigproc.codes import SpreadingCodeSet, generate_walsh_hadamard


@pytest.fixture(scope="module")
def deps_logging():
    import logging

    import logging_bullet_train

    logging_bullet_train.set_logger(logging.getLogger("collabdiv"))
    return None


@pytest.fixture(scope="module")
def deps_logfire():
    import logfire

    import collabdiv

    logfire.configure(
        service_name=collabdiv.__name__ + "-tests",
        service_version=collabdiv.__version__,
        send_to_logfire=False,
        console=False,
    )
    return None


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240521)


@pytest.fixture(scope="module")
def code_set_16() -> SpreadingCodeSet:
    return generate_walsh_hadamard(16)


@pytest.fixture(scope="module")
def temp_dir():
    with tempfile.TemporaryDirectory() as temp_dir:
        yield pathlib.Path(temp_dir)


@pytest.fixture(scope="module")
def record_factory():
    from collabdiv.harness.records import BerRecord
    from collabdiv.harness.stats import wilson_interval
    from collabdiv.protocol.config import Scheme

    def make_record(
        scheme: Scheme, ebn0_db: float, ber: float, bits: int = 10**9, **kwargs
    ) -> BerRecord:
        errors = int(round(ber * bits))
        ci_low, ci_high = wilson_interval(errors, bits)
        fields = dict(
            scheme=scheme,
            ebn0_db=ebn0_db,
            beta_db=10.0,
            mu_db=10.0,
            timing_sigma=0.0,
            bits=bits,
            errors=errors,
            ber=errors / bits,
            ci_low=ci_low,
            ci_high=ci_high,
            truncated=False,
            seed=0,
        )
        fields.update(kwargs)
        return BerRecord(**fields)

    return make_record
