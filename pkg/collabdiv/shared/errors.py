import typing


class InvalidArgumentError(ValueError):
    pass


class NotEstimableError(ValueError):
    pass


class SweepPointError(RuntimeError):
    def __init__(
        self,
        message: typing.Text,
        *,
        scheme: typing.Text,
        ebn0_db: float,
        beta_db: float,
        timing_sigma: float,
    ):
        super().__init__(
            f"{message} (scheme={scheme}, ebn0_db={ebn0_db}, "
            + f"beta_db={beta_db}, timing_sigma={timing_sigma})"
        )
        self.scheme = scheme
        self.ebn0_db = ebn0_db
        self.beta_db = beta_db
        self.timing_sigma = timing_sigma
