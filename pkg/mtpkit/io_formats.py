"""
Text formats: point-set files, corpus manifests and encoding files.

All numbers are written as exact rationals ("3", "-5/2"), so parameter vectors such as
the 1/3 scale factors of time-scaling transformations survive a round trip unchanged.
The functions here work on strings; `read_*` helpers wrap them for paths.
"""
from pathlib import Path

from mtpkit.encoder import Encoding, OccurrenceSet
from mtpkit.errors import DuplicatePointError, MtpkitError, ParseError
from mtpkit.geometry import Dataset, format_scalar, parse_scalar
from mtpkit.transforms import Transformation, get_transformation_class

ENCODING_MAGIC = "MTPENC"
ENCODING_VERSION = "1"


def _content_lines(text):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _parse_numbers(tokens, line_number):
    try:
        return tuple(parse_scalar(token) for token in tokens)
    except MtpkitError as e:
        raise ParseError(str(e), line_number) from e


def parse_dataset(text, dimension=None):
    points = []
    seen = set()
    for number, line in _content_lines(text):
        point = _parse_numbers(line.split(), number)
        if dimension is None:
            dimension = len(point)
        elif len(point) != dimension:
            raise ParseError(f"expected {dimension} coordinates, got {len(point)}", number)
        if point in seen:
            raise DuplicatePointError(f"duplicate point {line}", number)
        seen.add(point)
        points.append(point)
    return Dataset.collect(points, dimension or 2)


def _format_point(point):
    return " ".join(format_scalar(c) for c in point)


def serialize_dataset(dataset):
    return "".join(_format_point(p) + "\n" for p in dataset.sorted_points())


def read_dataset(path):
    return parse_dataset(Path(path).read_text(encoding="utf-8"))


def parse_manifest(text):
    """
    Parses a corpus manifest: one `<relative-path> TAB <label>` entry per line.

    Returns:
    list of (str, str): (path, label) pairs in file order.
    """
    entries = []
    seen = set()
    for number, line in _content_lines(text):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ParseError("expected <path> TAB <label>", number)
        path, label = parts[0].strip(), parts[1].strip()
        if path in seen:
            raise ParseError(f"path {path!r} listed twice", number)
        seen.add(path)
        entries.append((path, label))
    return entries


def read_manifest(path):
    """Reads a manifest and every dataset it lists, relative to the manifest's folder."""
    path = Path(path)
    base = path.parent
    items = []
    for name, label in parse_manifest(path.read_text(encoding="utf-8")):
        try:
            dataset = read_dataset(base / name)
        except ParseError as e:
            raise ParseError(f"{name}: {e}") from e
        items.append((name, label, dataset))
    return items


def serialize_encoding(encoding):
    lines = [f"{ENCODING_MAGIC} {ENCODING_VERSION} {encoding.class_id} {encoding.dimension}"]
    for os in encoding.blocks():
        lines.append(f"P {len(os.pattern)}")
        lines.extend(_format_point(p) for p in os.pattern.sorted_points())
        lines.append(f"T {len(os.transformations)}")
        lines.extend(" ".join(format_scalar(v) for v in f.sigma) for f in os.transformations)
    return "\n".join(lines) + "\n"


class _LineReader:

    def __init__(self, text):
        self.lines = [(n, line) for n, line in _content_lines(text)]
        self.position = 0

    def done(self):
        return self.position >= len(self.lines)

    def next(self, expecting):
        if self.done():
            last = self.lines[-1][0] if self.lines else 1
            raise ParseError(f"unexpected end of file, expected {expecting}", last)
        entry = self.lines[self.position]
        self.position += 1
        return entry

    def count(self, tag):
        number, line = self.next(f"'{tag} <count>'")
        parts = line.split()
        if len(parts) != 2 or parts[0] != tag or not parts[1].isdigit():
            raise ParseError(f"expected '{tag} <count>', got {line!r}", number)
        return int(parts[1]), number


def parse_encoding(text):
    """
    Parses an encoding file written by serialize_encoding. Raises ParseError naming the
    offending line on a bad header, a malformed or overrunning count, a point of the wrong
    arity or a parameter vector that is invalid for the encoding's class.
    """
    reader = _LineReader(text)
    number, header = reader.next("header")
    parts = header.split()
    if len(parts) != 4 or parts[0] != ENCODING_MAGIC:
        raise ParseError(f"expected '{ENCODING_MAGIC} <version> <class> <k>' header", number)
    if parts[1] != ENCODING_VERSION:
        raise ParseError(f"unsupported encoding version {parts[1]}", number)
    try:
        cls = get_transformation_class(parts[2])
    except MtpkitError as e:
        raise ParseError(str(e), number) from e
    if not parts[3].isdigit() or int(parts[3]) != cls.dimension:
        raise ParseError(f"{cls.class_id} encodings have dimension {cls.dimension}, header says {parts[3]}", number)
    k = cls.dimension

    blocks = []
    while not reader.done():
        size, _ = reader.count("P")
        points = []
        for _ in range(size):
            number, line = reader.next("a point")
            point = _parse_numbers(line.split(), number)
            if len(point) != k:
                raise ParseError(f"expected {k} coordinates, got {len(point)}", number)
            points.append(point)
        if len(set(points)) != len(points):
            raise ParseError("pattern lists a point twice", number)
        n_transformations, count_line = reader.count("T")
        transformations = []
        for _ in range(n_transformations):
            number, line = reader.next("a parameter vector")
            sigma = _parse_numbers(line.split(), number)
            try:
                transformations.append(Transformation(cls.class_id, sigma))
            except MtpkitError as e:
                raise ParseError(str(e), number) from e
        if blocks and not blocks[-1][1]:
            raise ParseError("only the final block may have no transformations", count_line)
        blocks.append((Dataset.collect(points, k), transformations))

    residual = Dataset.collect((), k)
    if blocks and not blocks[-1][1]:
        residual = blocks.pop()[0]
    occurrence_sets = tuple(OccurrenceSet(pattern, tuple(ts)) for pattern, ts in blocks)
    return Encoding(occurrence_sets, residual, k, cls.class_id)


def read_encoding(path):
    return parse_encoding(Path(path).read_text(encoding="utf-8"))
