"""The ten benchmark tasks, their metrics, and reporting row orders."""

from .errors import HarnessError

# canonical task name -> (dataset name used by the TDC loader, metric)
TASKS = {
    "hERG": ("hERG", "auroc"),
    "CYP3A4_Sub": ("CYP3A4_Substrate_CarbonMangels", "auroc"),
    "CYP2D6_Sub": ("CYP2D6_Substrate_CarbonMangels", "auprc"),
    "BBB_Martins": ("BBB_Martins", "auroc"),
    "PGP_Broccatelli": ("PGP_Broccatelli", "auroc"),
    "CYP2C9_Sub": ("CYP2C9_Substrate_CarbonMangels", "auprc"),
    "Bioavailability_Ma": ("Bioavailability_Ma", "auroc"),
    "DILI": ("DILI", "auroc"),
    "HIA_Hou": ("HIA_Hou", "auroc"),
    "AMES": ("AMES", "auroc"),
}

MODES = ("baseline", "polynomial", "quantum")
SEEDS = (1, 2, 3, 4, 5)

# performance table row order
TABLE1_ORDER = (
    "hERG", "CYP3A4_Sub", "CYP2D6_Sub", "BBB_Martins", "PGP_Broccatelli",
    "CYP2C9_Sub", "Bioavailability_Ma", "DILI", "HIA_Hou", "AMES",
)
# significance table rows
TABLE2_ORDER = ("CYP3A4_Sub", "BBB_Martins", "hERG", "PGP_Broccatelli")
# importance table rows
TABLE3_ORDER = (
    "CYP2D6_Sub", "CYP3A4_Sub", "CYP2C9_Sub", "Bioavailability_Ma",
    "hERG", "AMES", "BBB_Martins", "DILI", "PGP_Broccatelli", "HIA_Hou",
)


def require_task(name: str) -> tuple[str, str]:
    """Map a task name to (dataset name, metric); unknown names list the
    supported tasks."""
    if name not in TASKS:
        supported = ", ".join(sorted(TASKS))
        raise HarnessError(
            f"unknown benchmark {name!r}; supported tasks: {supported}"
        )
    return TASKS[name]


def metric_for(name: str) -> str:
    return require_task(name)[1]
