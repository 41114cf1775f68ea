"""Single home for every rendering convention: colors, labels, rc settings.

Pinning these (and the Agg backend) makes renders byte-reproducible: the
same CSV always yields the same image file.
"""

import matplotlib

matplotlib.use("Agg")

# one color per asymmetry level
PALETTE = ["#4C72B0", "#DD8452", "#55A868", "#C44E52", "#8172B3", "#937860"]
BAND_ALPHA = 0.25
MARKERS = ["o", "s", "^", "D", "v", "P"]

BIAS_LABELS = {
    0.25: "Left-leaning majority",
    0.5: "Balanced",
    0.75: "Right-leaning majority",
}

METHOD_LABELS = {
    "ap": "Mean affective polarization",
    "ipa": "Mean in-party affect",
    "opa": "Mean out-party affect",
    "tmax": "Mean time to 90% of max affect",
}

Y_LIMITS = {"ap": (0.0, 100.0), "ipa": (50.0, 100.0), "opa": (0.0, 50.0)}

RC = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "svg.hashsalt": "figviews",
}


def bias_label(value):
    return BIAS_LABELS.get(value, f"{value:g}")


def apply():
    matplotlib.rcParams.update(RC)
