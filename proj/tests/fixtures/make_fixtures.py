#!/usr/bin/env python3
"""Regenerates the PDF fixtures and their reference-extractor golden files.

The golden text comes from pdfminer.six (an independent extractor); form feeds
between pages are replaced by a newline. Run once and commit the outputs:

    python3 tests/fixtures/make_fixtures.py
"""
import os

from pdfminer.high_level import extract_text
from reportlab.lib.pagesizes import A4
from reportlab.pdfbase import pdfmetrics
from reportlab.pdfbase.ttfonts import TTFont
from reportlab.pdfgen import canvas

HERE = os.path.dirname(os.path.abspath(__file__))

LEFT = [
    "Smallholder farmers face rising climate risk.",
    "Access to credit strongly reduces vulnerability",
    "and information increases awareness of",
    "adaptation measures among rural households.",
    "Education improves adaptive capacity in most",
    "of the surveyed districts.",
]
RIGHT = [
    "Market access enhances income stability for",
    "farm households in the study region.",
    "Drought constrains crop yields across all",
    "seasons observed in the panel data.",
    "Social capital relates to collective action",
    "and extension services.",
]
PAGE2 = [
    "Results",
    "Information increases awareness.",
    "Age reduces uptake and improves caution.",
]


def hello(path):
    c = canvas.Canvas(path, pagesize=A4, pageCompression=0)
    c.setFont("Helvetica", 12)
    c.drawString(72, 760, "Hello world")
    c.save()


def two_col(path, compress):
    c = canvas.Canvas(path, pagesize=A4, pageCompression=compress)
    c.setTitle("Climate Adaptation Among Farmers")
    width, height = A4
    c.setFont("Helvetica-Bold", 16)
    c.drawCentredString(width / 2, height - 72, "Climate Adaptation Among Farmers")
    c.setFont("Helvetica", 10)
    for col, lines in ((0, LEFT), (1, RIGHT)):
        x = 56 if col == 0 else 310
        y = height - 120
        for line in lines:
            if line:
                c.drawString(x, y, line)
                y -= 13
            else:
                y -= 20
    c.showPage()
    c.setFont("Helvetica-Bold", 12)
    c.drawString(56, height - 72, PAGE2[0])
    c.setFont("Helvetica", 10)
    y = height - 92
    for line in PAGE2[1:]:
        c.drawString(56, y, line)
        y -= 13
    c.save()


def unicode_font(path):
    pdfmetrics.registerFont(TTFont("DejaVu", "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf"))
    c = canvas.Canvas(path, pagesize=A4, pageCompression=1)
    c.setFont("DejaVu", 11)
    c.drawString(72, 760, "Café owners in São Paulo")
    c.drawString(72, 745, "adapt to heat – 2019")
    c.save()


def encrypted(path):
    c = canvas.Canvas(path, pagesize=A4, encrypt="secret")
    c.setFont("Helvetica", 12)
    c.drawString(72, 760, "Hidden text")
    c.save()


def golden(pdf, out):
    text = extract_text(pdf).replace("\x0c", "\n")
    with open(out, "w", encoding="utf-8") as f:
        f.write(text)


def main():
    hello(os.path.join(HERE, "hello.pdf"))
    two_col(os.path.join(HERE, "two_col.pdf"), 0)
    two_col(os.path.join(HERE, "two_col_flate.pdf"), 1)
    unicode_font(os.path.join(HERE, "unicode_font.pdf"))
    encrypted(os.path.join(HERE, "encrypted.pdf"))
    golden(os.path.join(HERE, "two_col.pdf"), os.path.join(HERE, "two_col.golden.txt"))
    golden(os.path.join(HERE, "unicode_font.pdf"), os.path.join(HERE, "unicode_font.golden.txt"))


if __name__ == "__main__":
    main()
