import xml.etree.ElementTree as ET

import pytest

from edakit.assoc import CorrMethod, CorrelationMatrix, correlation_matrix
from edakit.stats import BinCount, Histogram, histogram, summarize
from edakit.table import FreqRow, FrequencyTable, Table, numeric_column, value_counts, categorical_column
from edakit.viz import (
    diverging_color,
    plot_bar,
    plot_box,
    plot_heatmap,
    plot_histogram,
    plot_scatter,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


def parse(doc):
    return ET.fromstring(doc.body)


def elements_with_class(doc, cls, tag="rect"):
    root = parse(doc)
    return [e for e in root.iter(f"{SVG_NS}{tag}") if e.get("class") == cls]


class TestHistogramPlot:
    def test_one_rect_per_bin(self):
        h = histogram(numeric_column("v", [1, 2, 3, 9]), BinCount(4))
        doc = plot_histogram(h, "demo")
        assert len(elements_with_class(doc, "bar")) == 4

    def test_single_bin(self):
        h = Histogram(edges=(1.0, 1.0), counts=(5,))
        doc = plot_histogram(h)
        assert len(elements_with_class(doc, "bar")) == 1

    def test_equal_counts_equal_heights(self):
        h = Histogram(edges=(0.0, 1.0, 2.0, 3.0), counts=(4, 4, 4))
        bars = elements_with_class(plot_histogram(h), "bar")
        heights = {b.get("height") for b in bars}
        assert len(heights) == 1

    def test_doubling_count_doubles_height(self):
        h1 = Histogram(edges=(0.0, 1.0, 2.0), counts=(1, 4))
        h2 = Histogram(edges=(0.0, 1.0, 2.0), counts=(2, 4))
        b1 = elements_with_class(plot_histogram(h1), "bar")
        b2 = elements_with_class(plot_histogram(h2), "bar")
        assert float(b2[0].get("height")) == 2 * float(b1[0].get("height"))

    def test_well_formed_and_deterministic(self):
        h = Histogram(edges=(0.0, 2.5, 5.0), counts=(3, 7))
        a = plot_histogram(h, "title with <angle> & amp")
        b = plot_histogram(h, "title with <angle> & amp")
        parse(a)
        assert a.body == b.body


class TestBoxPlot:
    def stats(self):
        return summarize(numeric_column("v", [1, 2, 3, 4, 100]))

    def test_outlier_marker(self):
        doc = plot_box(self.stats(), points_beyond=[100.0])
        assert len(elements_with_class(doc, "outlier", tag="circle")) == 1

    def test_no_outliers_no_markers(self):
        s = summarize(numeric_column("v", [1, 2, 3, 4]))
        doc = plot_box(s)
        assert elements_with_class(doc, "outlier", tag="circle") == []

    def test_median_centered_for_symmetric_data(self):
        s = summarize(numeric_column("v", [1, 2, 3, 4, 5]))
        doc = plot_box(s)
        box = elements_with_class(doc, "box")[0]
        top = float(box.get("y"))
        mid = top + float(box.get("height")) / 2
        median_line = [
            line for line in parse(doc).iter(f"{SVG_NS}line")
            if line.get("stroke-width") == "2"
        ][0]
        assert abs(float(median_line.get("y1")) - mid) < 1e-6

    def test_well_formed(self):
        parse(plot_box(self.stats(), points_beyond=[100.0]))


class TestBarPlot:
    def freq(self):
        return value_counts(
            categorical_column("g", ["France"] * 5 + ["Spain"] * 2 + ["Germany"] * 3)
        )

    def test_bars_in_row_order_first_tallest(self):
        doc = plot_bar(self.freq(), "geo")
        bars = elements_with_class(doc, "bar")
        heights = [float(b.get("height")) for b in bars]
        assert heights == sorted(heights, reverse=True)
        assert len(bars) == 3

    def test_single_category_full_height(self):
        f = FrequencyTable((FreqRow("only", 7, 1.0),))
        bars = elements_with_class(plot_bar(f), "bar")
        assert len(bars) == 1
        assert float(bars[0].get("height")) == 480.0  # plot area height

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            plot_bar(FrequencyTable(()))

    def test_label_escaping(self):
        f = FrequencyTable((FreqRow('a"&<b>', 1, 1.0),))
        parse(plot_bar(f))  # must stay well-formed


class TestScatterPlot:
    def test_marker_per_joint_pair(self):
        x = numeric_column("x", [1, 2, None, 4])
        y = numeric_column("y", [2, None, 5, 8])
        doc = plot_scatter(x, y)
        assert len(elements_with_class(doc, "pt", tag="circle")) == 2

    def test_identical_points_coincide(self):
        x = numeric_column("x", [3, 3])
        y = numeric_column("y", [4, 4])
        pts = elements_with_class(plot_scatter(x, y), "pt", tag="circle")
        assert pts[0].get("cx") == pts[1].get("cx")
        assert pts[0].get("cy") == pts[1].get("cy")

    def test_no_pairs_rejected(self):
        x = numeric_column("x", [1, None])
        y = numeric_column("y", [None, 2])
        with pytest.raises(ValueError, match="jointly present"):
            plot_scatter(x, y)

    def test_deterministic(self):
        x = numeric_column("x", [1, 2, 3])
        y = numeric_column("y", [4, 5, 6])
        assert plot_scatter(x, y).body == plot_scatter(x, y).body


class TestHeatmap:
    def matrix(self):
        t = Table(
            "t",
            (numeric_column("x", [1, 2, 3]), numeric_column("y", [2, 4, 6])),
            3,
        )
        return correlation_matrix(t, CorrMethod.PEARSON)

    def test_collinear_cells_max_red(self):
        doc = plot_heatmap(self.matrix())
        cells = elements_with_class(doc, "cell")
        assert len(cells) == 4
        assert {c.get("fill") for c in cells} == {"#ff0000"}

    def test_midpoint_color_exact_white(self):
        assert diverging_color(0.0) == "#ffffff"
        assert diverging_color(1.0) == "#ff0000"
        assert diverging_color(-1.0) == "#0000ff"

    def test_undefined_cell_gray(self):
        m = CorrelationMatrix(
            CorrMethod.PEARSON, ("a", "b"), ((1.0, None), (None, 1.0))
        )
        doc = plot_heatmap(m)
        fills = [c.get("fill") for c in elements_with_class(doc, "cell")]
        assert fills.count("#808080") == 2
        assert "NA" in doc.body

    def test_annotations_two_decimals(self):
        doc = plot_heatmap(self.matrix())
        assert "1.00" in doc.body

    def test_empty_rejected(self):
        m = CorrelationMatrix(CorrMethod.PEARSON, (), ())
        with pytest.raises(ValueError, match="empty"):
            plot_heatmap(m)


class TestDocumentProperties:
    def docs(self):
        h = Histogram(edges=(0.0, 1.0, 2.0), counts=(3, 5))
        x = numeric_column("x", [1, 2, 3])
        y = numeric_column("y", [4, 5, 6])
        return [
            plot_histogram(h, "h"),
            plot_bar(FrequencyTable((FreqRow("a", 2, 0.5), FreqRow("b", 2, 0.5))), "b"),
            plot_scatter(x, y, "s"),
            plot_heatmap(self_matrix(), "m"),
            plot_box(summarize(numeric_column("v", [1, 2, 3, 9])), title="bx"),
        ]

    def test_all_parse_as_xml(self):
        for doc in self.docs():
            parse(doc)

    def test_svg_root_and_size(self):
        for doc in self.docs():
            root = parse(doc)
            assert root.tag == f"{SVG_NS}svg"
            assert root.get("width") == "800"
            assert root.get("height") == "600"
            assert root.get("version") == "1.1"

    def test_no_external_references(self):
        for doc in self.docs():
            assert "http://" not in doc.body.replace("http://www.w3.org", "")
            assert "href" not in doc.body

    def test_byte_determinism(self):
        first = [d.body for d in self.docs()]
        second = [d.body for d in self.docs()]
        assert first == second

    def test_tick_labels_four_significant_digits(self):
        h = Histogram(edges=(0.123456, 1.234567, 2.345678), counts=(1, 2))
        doc = plot_histogram(h)
        assert "0.1235" in doc.body

    def test_write(self, tmp_path):
        path = tmp_path / "out.svg"
        self.docs()[0].write(path)
        assert path.read_bytes().startswith(b"<?xml")


def self_matrix():
    t = Table(
        "t",
        (numeric_column("x", [1, 2, 3]), numeric_column("y", [3, 1, 2])),
        3,
    )
    return correlation_matrix(t, CorrMethod.PEARSON)
