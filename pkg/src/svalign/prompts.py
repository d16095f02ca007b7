"""Access to the shipped prompt template files."""

from importlib import resources

TEMPLATE_NAMES = (
    "alignment_check_binary",
    "alignment_check_threeway",
    "inconsistency_property",
    "inconsistency_sva",
    "refine_property",
    "refine_sva",
    "evidence",
    "unknown_analysis",
    "summary",
)


def load_template(name: str) -> str:
    """Return the text of a shipped template by its short name."""
    if name not in TEMPLATE_NAMES:
        raise KeyError(f"unknown template {name!r}")
    return (
        resources.files("svalign.templates")
        .joinpath(f"{name}.txt")
        .read_text(encoding="utf-8")
    )
