from typing import List

from pydantic import ValidationError

from ..DTOs.models import MAX_WIDTH, Permutation  # Relative import


class SpecParserError(Exception):
    """Custom exception for specification file errors."""
    pass


class NotReversibleError(SpecParserError):
    """Raised when the listed outputs are not a bijection."""
    pass


def _content_lines(text: str) -> List[tuple]:
    # (line number, stripped text) for every non-blank, non-comment line
    rows = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append((number, line))
    return rows


def parse_spec(text: str) -> Permutation:
    """
    Parses a specification: a header line `n <width>` followed by 2^n decimal
    output values, one per line, in input order.

    Args:
        text: The file contents.

    Returns:
        The Permutation the file describes.

    Raises:
        SpecParserError: On a bad header, a non-integer or out-of-range value, or a wrong line count.
        NotReversibleError: If an output value repeats; the message names the first repeated row.
    """
    rows = _content_lines(text)
    if not rows:
        raise SpecParserError("Error: Specification is empty.")
    header_line, header = rows[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n":
        raise SpecParserError(f"Error: Line {header_line}: expected header 'n <width>', got '{header}'.")
    try:
        width = int(parts[1])
    except ValueError:
        raise SpecParserError(f"Error: Line {header_line}: width '{parts[1]}' is not an integer.")
    if width < 1 or width > MAX_WIDTH:
        raise SpecParserError(f"Error: Line {header_line}: width {width} is outside [1, {MAX_WIDTH}].")

    size = 1 << width
    body = rows[1:]
    if len(body) != size:
        raise SpecParserError(f"Error: Expected {size} output values for n={width}, found {len(body)}.")

    values: List[int] = []
    first_row = {}
    for index, (number, line) in enumerate(body):
        try:
            value = int(line)
        except ValueError:
            raise SpecParserError(f"Error: Line {number}: '{line}' is not a decimal integer.")
        if value < 0 or value >= size:
            raise SpecParserError(f"Error: Line {number}: value {value} is outside [0, {size - 1}].")
        if value in first_row:
            raise NotReversibleError(
                f"Error: Specification is not reversible: row {index} repeats output {value} of row {first_row[value]}."
            )
        first_row[value] = index
        values.append(value)

    try:
        return Permutation(width=width, table=tuple(values))
    except ValidationError as e:
        raise SpecParserError(f"Error: Specification is invalid. Details: {e}")


def serialize_spec(p: Permutation) -> str:
    """Canonical form: header, then one decimal value per line, newline-terminated."""
    return "\n".join([f"n {p.width}"] + [str(v) for v in p.table]) + "\n"


def load_spec(file_path: str) -> Permutation:
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            text = f.read()
    except FileNotFoundError:
        raise SpecParserError(f"Error: Specification file not found at {file_path}")
    except Exception as e:
        raise SpecParserError(f"Error: Could not read specification file {file_path}. Details: {e}")
    return parse_spec(text)


def save_spec(p: Permutation, file_path: str) -> None:
    with open(file_path, 'w', encoding='utf-8') as f:
        f.write(serialize_spec(p))


if __name__ == '__main__':
    sample = "n 2\n0\n2\n1\n3\n"
    perm = parse_spec(sample)
    print("Parsed:", perm.table)
    print("Round trip:", serialize_spec(perm) == sample)
    try:
        parse_spec("n 2\n0\n1\n1\n3\n")
    except NotReversibleError as e:
        print(e)
