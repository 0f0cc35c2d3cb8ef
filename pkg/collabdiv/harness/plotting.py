import itertools
import logging
import pathlib
import typing

from collabdiv.harness.records import BerRecord
from collabdiv.protocol.config import Scheme
from collabdiv.shared.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


def curve_label(record: BerRecord) -> typing.Text:
    if record.scheme in (Scheme.NONCOOP, Scheme.ALAMOUTI):
        return record.scheme.value
    label = f"{record.scheme.value} beta={record.beta_db:g} dB"
    if record.timing_sigma > 0:
        label += f" sigma={record.timing_sigma:g} chips"
    return label


def plot_ber_curves(
    records: typing.Sequence[BerRecord], output: pathlib.Path | str
) -> pathlib.Path:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as e:
        raise InvalidArgumentError(
            "Plotting needs matplotlib: install the 'plot' extra"
        ) from e

    fig, ax = plt.subplots(figsize=(7, 5))
    ordered = sorted(records, key=curve_label)
    for label, group in itertools.groupby(ordered, key=curve_label):
        curve = sorted((r for r in group if r.ber > 0), key=lambda r: r.ebn0_db)
        if not curve:
            continue
        ax.semilogy(
            [r.ebn0_db for r in curve], [r.ber for r in curve], marker="o", label=label
        )
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", ls=":")
    ax.legend(fontsize="small")

    output = pathlib.Path(output)
    fig.savefig(output, dpi=120, bbox_inches="tight")
    plt.close(fig)
    logger.info(f"Saved BER plot to {output}")
    return output
