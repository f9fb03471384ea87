"""Embedded application datasets and CSV ingestion.

``air-lead``: 15 NIOSH air lead concentrations (ug/m3).
``potency``: 25 relative potency measurements (percent) from five
manufacturing campaigns, flattened in campaign order.
"""

from __future__ import annotations

import os

from .distributions import Sample

__all__ = ["AIR_LEAD", "POTENCY", "EMBEDDED", "load_data", "DataFormatError"]

AIR_LEAD = (200.0, 120.0, 15.0, 7.0, 86.0, 48.0, 61.0, 380.0,
            80.0, 29.0, 1000.0, 350.0, 1400.0, 110.0, 37.0)

POTENCY = (95.661, 102.259, 103.135, 99.827,
           98.830, 94.887, 103.362, 94.117,
           96.665, 106.234, 103.735, 104.317, 101.807,
           98.198, 98.186, 107.872, 99.987, 103.051, 106.445,
           95.922, 102.956, 101.596, 96.806, 107.041, 92.589)

EMBEDDED = {"air-lead": AIR_LEAD, "potency": POTENCY}


class DataFormatError(ValueError):
    pass


def load_data(source: str) -> Sample:
    """Sample from an embedded dataset name or a one-column CSV file.

    The CSV may have an optional non-numeric header line; any later
    non-numeric or empty row is an error reported with its row number.
    """
    if source in EMBEDDED:
        return Sample(EMBEDDED[source])
    if not os.path.exists(source):
        raise DataFormatError(f"no such data file or embedded dataset: {source!r} "
                              f"(embedded names: {sorted(EMBEDDED)})")
    values = []
    saw_row = False
    with open(source, "r", encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip().strip("﻿")
            if not text:
                continue
            cell = text.split(",")[0].strip()
            try:
                values.append(float(cell))
            except ValueError:
                if not saw_row:
                    saw_row = True
                    continue  # single header line allowed
                raise DataFormatError(
                    f"{source}: non-numeric value {cell!r} at line {lineno}") from None
            saw_row = True
    if not values:
        raise DataFormatError(f"{source}: no numeric rows found (empty file?)")
    return Sample(values)
