"""Command-line front end mirroring FigureRequest."""

import argparse
import sys

from .render import METRICS, FigureRequest, render


def main(argv=None):
    parser = argparse.ArgumentParser(prog="figviews",
                                     description="Render sweep CSVs as figures")
    parser.add_argument("--metric", choices=METRICS, required=True,
                        help="which panel to draw (ap/ipa/opa read aggregate.csv, "
                             "tmax reads tmax.csv)")
    parser.add_argument("--input", required=True, help="input CSV path")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--format", default="png", choices=("png", "svg", "pdf"))
    args = parser.parse_args(argv)
    try:
        render(FigureRequest(metric=args.metric, input_path=args.input,
                             output_path=args.out, image_format=args.format))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
