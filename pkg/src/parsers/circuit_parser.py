import re
from typing import List, Optional

from pydantic import ValidationError

from ..DTOs.models import Circuit, Gate  # Relative import

GATE_PATTERN = re.compile(r"^t(\d+)\s+(\S+)(?:\s+#\s*cost=(\d+))?$")


class CircuitParserError(Exception):
    """Custom exception for circuit file errors."""
    pass


def _variables(width: int) -> str:
    return ",".join(f"x{i}" for i in range(width))


def _line_index(token: str, names: Optional[List[str]], number: int) -> int:
    if names is not None:
        if token not in names:
            raise CircuitParserError(f"Error: Line {number}: unknown variable '{token}'.")
        return names.index(token)
    if not re.fullmatch(r"x\d+", token):
        raise CircuitParserError(f"Error: Line {number}: variable '{token}' is not of the form x<i>.")
    return int(token[1:])


def parse_circuit(text: str, width: Optional[int] = None) -> Circuit:
    """
    Parses a TFC-style circuit.

    Headers `.v`, `.i` and `.o` list the variables (every line is both input
    and output). Gate lines read `t<k> c1,...,c_{k-1},target`, optionally
    followed by `# cost=<N>` to carry a charged cost. BEGIN/END markers and
    `#` comment lines are skipped. Without a `.v` header the width is the
    highest x<i> index plus one, unless `width` is given.

    Raises:
        CircuitParserError: On unknown gate names or variables, an arity mismatch,
            a target listed among its controls, or a malformed header.
    """
    names: Optional[List[str]] = None
    parsed = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.upper() in ("BEGIN", "END"):
            continue
        if line.startswith("."):
            key, _, rest = line.partition(" ")
            variables = [v.strip() for v in rest.replace(" ", ",").split(",") if v.strip()]
            if key == ".v":
                if len(set(variables)) != len(variables) or not variables:
                    raise CircuitParserError(f"Error: Line {number}: '.v' must list distinct variables.")
                names = variables
            elif key in (".i", ".o"):
                if names is not None and variables != names:
                    raise CircuitParserError(f"Error: Line {number}: '{key}' must list every variable of '.v'.")
            else:
                raise CircuitParserError(f"Error: Line {number}: unknown header '{key}'.")
            continue

        match = GATE_PATTERN.match(line)
        if match is None:
            name = line.split()[0]
            if re.fullmatch(r"t\d+", name):
                raise CircuitParserError(f"Error: Line {number}: malformed gate line '{line}'.")
            raise CircuitParserError(f"Error: Line {number}: unknown gate '{name}'.")
        arity = int(match.group(1))
        tokens = match.group(2).split(",")
        if arity < 1 or len(tokens) != arity:
            raise CircuitParserError(
                f"Error: Line {number}: gate t{arity} needs {arity} variables, got {len(tokens)}."
            )
        lines = [_line_index(t, names, number) for t in tokens]
        controls, target = lines[:-1], lines[-1]
        if target in controls:
            raise CircuitParserError(f"Error: Line {number}: target x{target} is also listed as a control.")
        if len(set(controls)) != len(controls):
            raise CircuitParserError(f"Error: Line {number}: repeated control.")
        cost = int(match.group(3)) if match.group(3) else None
        parsed.append((number, controls, target, cost))

    if names is not None:
        width = len(names)
    elif width is None:
        width = max((max([t] + c) for _, c, t, _ in parsed), default=0) + 1

    gates: List[Gate] = []
    for number, controls, target, cost in parsed:
        try:
            gates.append(Gate(controls=tuple(controls), target=target, width=width, charged_cost=cost))
        except ValidationError as e:
            raise CircuitParserError(f"Error: Line {number}: invalid gate. Details: {e}")
    try:
        return Circuit(width=width, gates=tuple(gates))
    except ValidationError as e:
        raise CircuitParserError(f"Error: Invalid circuit. Details: {e}")


def serialize_gate(g: Gate) -> str:
    operands = [f"x{c}" for c in sorted(g.controls, reverse=True)] + [f"x{g.target}"]
    line = f"t{len(operands)} {','.join(operands)}"
    if g.charged_cost is not None:
        line += f" # cost={g.charged_cost}"
    return line


def serialize_circuit(c: Circuit) -> str:
    """Deterministic, newline-terminated TFC-style text; controls are written highest line first."""
    variables = _variables(c.width)
    lines = [f".v {variables}", f".i {variables}", f".o {variables}", "BEGIN"]
    lines.extend(serialize_gate(g) for g in c.gates)
    lines.append("END")
    return "\n".join(lines) + "\n"


def load_circuit(file_path: str) -> Circuit:
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            text = f.read()
    except FileNotFoundError:
        raise CircuitParserError(f"Error: Circuit file not found at {file_path}")
    except Exception as e:
        raise CircuitParserError(f"Error: Could not read circuit file {file_path}. Details: {e}")
    return parse_circuit(text)


def save_circuit(c: Circuit, file_path: str) -> None:
    with open(file_path, 'w', encoding='utf-8') as f:
        f.write(serialize_circuit(c))


if __name__ == '__main__':
    demo = parse_circuit("t3 x2,x1,x0\nt1 x0\n")
    print(serialize_circuit(demo))
    try:
        parse_circuit("q2 x1,x0")
    except CircuitParserError as e:
        print(e)
