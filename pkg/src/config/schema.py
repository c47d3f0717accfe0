"""Water-quality column schema."""

from typing import Dict, List

# Default E.coli header, exactly as printed on the field sheets
ECOLI_COLUMN = "E.coli - (MPN/100mL)"

# Acceptable for recreation when the count is at most this value
ECOLI_THRESHOLD = 235.0

# Feature columns of the synthetic schema mapped to their units
FEATURE_COLUMNS: Dict[str, str] = {
    "NH3 (mg/L)": "mg/L",
    "NO2 (mg/L)": "mg/L",
    "NO3 (mg/L)": "mg/L",
    "SO4 (mg/L)": "mg/L",
    "Turbidity (NTU)": "NTU",
    "Flow rate (m3/s)": "m3/s",
}

# Columns dropped on ingestion if present (labels are always rederived)
LABEL_COLUMNS = ("label", "Label", "class", "Class")


def feature_names() -> List[str]:
    """Get the synthetic feature column names in schema order.

    Returns:
        List of column headers
    """
    return list(FEATURE_COLUMNS)


def is_known_feature(column: str) -> bool:
    """Check if a column header belongs to the synthetic schema.

    Args:
        column: CSV header

    Returns:
        True if column is a schema feature, False otherwise
    """
    return column in FEATURE_COLUMNS
