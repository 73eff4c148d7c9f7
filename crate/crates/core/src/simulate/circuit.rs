use std::collections::HashSet;
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::pauli::{Gate, PauliPoint, PauliVector, PhasedPauli};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Named single-qubit input states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedState {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
    /// `(|0> + e^{i pi/4}|1>)/sqrt 2`, Bloch vector `(1, 1, 0)/sqrt 2`.
    H,
    /// Bloch vector `(1, 1, 1)/sqrt 3`.
    T,
    Mixed,
}

impl NamedState {
    pub fn parse(s: &str) -> Option<NamedState> {
        use NamedState::*;
        Some(match s {
            "0" => Zero,
            "1" => One,
            "+" => Plus,
            "-" => Minus,
            "+i" | "i" => PlusI,
            "-i" => MinusI,
            "H" | "h" => H,
            "T" | "t" => T,
            "mixed" | "I" => Mixed,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        use NamedState::*;
        match self {
            Zero => "0",
            One => "1",
            Plus => "+",
            Minus => "-",
            PlusI => "+i",
            MinusI => "-i",
            H => "H",
            T => "T",
            Mixed => "mixed",
        }
    }

    pub fn is_stabilizer(&self) -> bool {
        !matches!(self, NamedState::H | NamedState::T | NamedState::Mixed)
    }

    /// Bloch vector `(x, y, z)`; irrational entries are refused on the exact path.
    pub fn bloch<S: Scalar>(&self) -> Result<[S; 3]> {
        use NamedState::*;
        let i = |v: i64| S::from_i64(v);
        let irr = |x: f64| {
            S::from_f64_checked(x).ok_or_else(|| {
                Error::InvalidLabel(format!(
                    "state {} has irrational coefficients; use the float path",
                    self.name()
                ))
            })
        };
        Ok(match self {
            Zero => [i(0), i(0), i(1)],
            One => [i(0), i(0), i(-1)],
            Plus => [i(1), i(0), i(0)],
            Minus => [i(-1), i(0), i(0)],
            PlusI => [i(0), i(1), i(0)],
            MinusI => [i(0), i(-1), i(0)],
            H => {
                let h = irr(std::f64::consts::FRAC_1_SQRT_2)?;
                [h.clone(), h, i(0)]
            }
            T => {
                let t = irr(1.0 / 3f64.sqrt())?;
                [t.clone(), t.clone(), t]
            }
            Mixed => [i(0), i(0), i(0)],
        })
    }
}

/// An input block: a named product state or explicit Pauli coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Named(NamedState),
    /// Exact coefficients `Tr(T_b rho)` on `n` qubits; the identity coefficient
    /// is implicitly 1.
    Coefficients { n: usize, terms: Vec<(PauliPoint, Rational)> },
}

impl StateSpec {
    /// `name` or `P=coef,Q=coef,...` (for example `X=1/2,Y=1/2`).
    pub fn parse(s: &str) -> Result<StateSpec> {
        if let Some(named) = NamedState::parse(s) {
            return Ok(StateSpec::Named(named));
        }
        if !s.contains('=') {
            return Err(Error::InvalidLabel(format!("unknown state {s:?}")));
        }
        let mut n = None;
        let mut terms = Vec::new();
        for part in s.split(',') {
            let (p, c) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidLabel(format!("bad term {part:?}")))?;
            let (len, point) = PauliPoint::parse_letters(p.trim())?;
            if *n.get_or_insert(len) != len {
                return Err(Error::InvalidLabel(format!("inconsistent lengths in {s:?}")));
            }
            if point.is_identity() {
                return Err(Error::InvalidLabel("identity coefficient is fixed to 1".into()));
            }
            let c = parse_rational(c)
                .ok_or_else(|| Error::InvalidLabel(format!("bad coefficient {c:?}")))?;
            terms.push((point, c));
        }
        Ok(StateSpec::Coefficients {
            n: n.unwrap_or(0),
            terms,
        })
    }

    /// Qubits covered by one instance of this spec.
    pub fn width(&self) -> Option<usize> {
        match self {
            StateSpec::Named(_) => None,
            StateSpec::Coefficients { n, .. } => Some(*n),
        }
    }

    pub fn is_stabilizer(&self) -> bool {
        matches!(self, StateSpec::Named(s) if s.is_stabilizer())
    }

    /// Pauli coefficients on `copies` qubits (named states are repeated).
    pub fn to_vector<S: Scalar>(&self, copies: usize) -> Result<PauliVector<S>> {
        match self {
            StateSpec::Named(named) => {
                let [x, y, z] = named.bloch::<S>()?;
                let one = PauliVector::from_terms(
                    1,
                    &[
                        (PauliPoint::IDENTITY, S::one()),
                        (PauliPoint::new(0, 1), x),
                        (PauliPoint::new(1, 1), y),
                        (PauliPoint::new(1, 0), z),
                    ],
                )?;
                let mut acc = PauliVector::maximally_mixed(0)?;
                for _ in 0..copies {
                    acc = acc.tensor(&one)?;
                }
                Ok(acc)
            }
            StateSpec::Coefficients { n, terms } => {
                if copies != *n {
                    return Err(Error::DimensionMismatch {
                        expected: *n,
                        got: copies,
                    });
                }
                let mut v = PauliVector::maximally_mixed(*n)?;
                for (p, c) in terms {
                    v.set(*p, S::from_rational(c));
                }
                Ok(v)
            }
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Named(s) => write!(f, "{}", s.name()),
            StateSpec::Coefficients { n, terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|(p, c)| format!("{}={}", p.to_letters(*n), format_rational(c)))
                    .collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InputState {
    pub spec: StateSpec,
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    /// A Clifford gate, applied only if the labelled earlier outcome was 1.
    Gate { gate: Gate, condition: Option<String> },
    Measure { pauli: PhasedPauli, label: String },
}

/// A Clifford + Pauli-measurement circuit together with its input state.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    inputs: Vec<InputState>,
    elements: Vec<Element>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            inputs: Vec::new(),
            elements: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inputs(&self) -> &[InputState] {
        &self.inputs
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn set_input(&mut self, spec: StateSpec, qubits: Vec<usize>) -> Result<()> {
        if let Some(w) = spec.width() {
            if w != qubits.len() {
                return Err(Error::DimensionMismatch {
                    expected: w,
                    got: qubits.len(),
                });
            }
        }
        for &q in &qubits {
            if q >= self.n {
                return Err(Error::OutOfRange(format!("qubit {q}")));
            }
            if self.inputs.iter().any(|i| i.qubits.contains(&q)) {
                return Err(Error::InvalidLabel(format!("qubit {q} assigned twice")));
            }
        }
        let mut seen = HashSet::new();
        if !qubits.iter().all(|q| seen.insert(*q)) {
            return Err(Error::InvalidLabel("repeated qubit in state line".into()));
        }
        self.inputs.push(InputState { spec, qubits });
        Ok(())
    }

    pub fn push_gate(&mut self, gate: Gate, condition: Option<&str>) -> Result<()> {
        gate.tableau(self.n)?;
        if let Some(label) = condition {
            if !self.labels().contains(&label) {
                return Err(Error::InvalidLabel(format!(
                    "condition {label:?} does not refer to an earlier measurement"
                )));
            }
        }
        self.elements.push(Element::Gate {
            gate,
            condition: condition.map(str::to_string),
        });
        Ok(())
    }

    pub fn push_measure(&mut self, pauli: PhasedPauli, label: &str) -> Result<()> {
        if pauli.n != self.n {
            return Err(Error::QubitMismatch(pauli.n, self.n));
        }
        if !pauli.is_hermitian() {
            return Err(Error::NotHermitian(pauli.to_string()));
        }
        if pauli.point.is_identity() {
            return Err(Error::InvalidLabel("cannot measure the identity".into()));
        }
        if label.is_empty() || self.labels().contains(&label) {
            return Err(Error::InvalidLabel(format!("duplicate or empty label {label:?}")));
        }
        self.elements.push(Element::Measure {
            pauli,
            label: label.to_string(),
        });
        Ok(())
    }

    /// Measurement labels in circuit order.
    pub fn labels(&self) -> Vec<&str> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                Element::Measure { label, .. } => Some(label.as_str()),
                _ => None,
            })
            .collect()
    }

    pub(crate) fn label_index(&self, label: &str) -> usize {
        self.labels()
            .iter()
            .position(|l| *l == label)
            .expect("labels validated on construction")
    }

    /// Blocks covering every qubit; unassigned qubits start in `|0>`.
    pub fn input_blocks(&self) -> Vec<InputState> {
        let mut blocks = self.inputs.clone();
        let assigned: HashSet<usize> = blocks.iter().flat_map(|b| b.qubits.clone()).collect();
        let free: Vec<usize> = (0..self.n).filter(|q| !assigned.contains(q)).collect();
        if !free.is_empty() {
            blocks.push(InputState {
                spec: StateSpec::Named(NamedState::Zero),
                qubits: free,
            });
        }
        blocks
    }

    /// Pauli coefficients of the full input state.
    pub fn input_vector<S: Scalar>(&self) -> Result<PauliVector<S>> {
        let mut out = PauliVector::maximally_mixed(self.n)?;
        for b in self.input_blocks() {
            let v = b.spec.to_vector::<S>(b.qubits.len())?;
            out = multiply_embedded(&out, &v, &b.qubits)?;
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or("");
            let rest: Vec<&str> = words.collect();
            if head == "qubits" {
                if circuit.is_some() {
                    return Err(parse_err(line_no, "repeated qubits line"));
                }
                let n = match rest.as_slice() {
                    [n] => n
                        .parse::<usize>()
                        .map_err(|_| parse_err(line_no, format!("bad qubit count {n:?}")))?,
                    _ => return Err(parse_err(line_no, "expected `qubits <n>`")),
                };
                if n == 0 || n > crate::pauli::MAX_QUBITS {
                    return Err(parse_err(line_no, format!("unsupported qubit count {n}")));
                }
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| parse_err(line_no, "first statement must be `qubits <n>`"))?;
            let wrap = |e: Error| parse_err(line_no, e.to_string());
            match head {
                "state" => {
                    let (spec, qubits) = rest
                        .split_first()
                        .ok_or_else(|| parse_err(line_no, "expected `state <spec> <qubits...>`"))?;
                    let spec = StateSpec::parse(spec).map_err(wrap)?;
                    let qubits = parse_qubits(qubits).map_err(|m| parse_err(line_no, m))?;
                    if qubits.is_empty() {
                        return Err(parse_err(line_no, "state line lists no qubits"));
                    }
                    c.set_input(spec, qubits).map_err(wrap)?;
                }
                "gate" => {
                    let (body, cond) = match rest.iter().position(|w| *w == "if") {
                        Some(p) => match &rest[p + 1..] {
                            [label] => (&rest[..p], Some(*label)),
                            _ => return Err(parse_err(line_no, "expected `if <label>`")),
                        },
                        None => (&rest[..], None),
                    };
                    let (name, qubits) = body
                        .split_first()
                        .ok_or_else(|| parse_err(line_no, "expected `gate <name> <qubits...>`"))?;
                    let qubits = parse_qubits(qubits).map_err(|m| parse_err(line_no, m))?;
                    let gate = Gate::from_name(name, &qubits).map_err(wrap)?;
                    c.push_gate(gate, cond).map_err(wrap)?;
                }
                "measure" => {
                    let (pauli, label) = match rest.as_slice() {
                        [p, "->", l] => (*p, *l),
                        _ => return Err(parse_err(line_no, "expected `measure <pauli> -> <label>`")),
                    };
                    let pauli: PhasedPauli = pauli.parse().map_err(wrap)?;
                    c.push_measure(pauli, label).map_err(wrap)?;
                }
                other => return Err(parse_err(line_no, format!("unknown statement {other:?}"))),
            }
        }
        circuit.ok_or_else(|| parse_err(0, "empty circuit"))
    }
}

fn parse_qubits(words: &[&str]) -> std::result::Result<Vec<usize>, String> {
    words
        .iter()
        .map(|w| w.parse::<usize>().map_err(|_| format!("bad qubit index {w:?}")))
        .collect()
}

/// `full * embed(block)` for a block acting on disjoint `positions`.
fn multiply_embedded<S: Scalar>(
    full: &PauliVector<S>,
    block: &PauliVector<S>,
    positions: &[usize],
) -> Result<PauliVector<S>> {
    let mut out = PauliVector::zeros(full.n())?;
    for (a, ca) in full.terms() {
        for (b, cb) in block.terms() {
            let p = a + b.embed(positions);
            out.set(p, ca.clone() * cb);
        }
    }
    Ok(out)
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for input in &self.inputs {
            let qs: Vec<String> = input.qubits.iter().map(|q| q.to_string()).collect();
            writeln!(f, "state {} {}", input.spec, qs.join(" "))?;
        }
        for e in &self.elements {
            match e {
                Element::Gate { gate, condition } => {
                    write!(f, "gate {gate}")?;
                    if let Some(l) = condition {
                        write!(f, " if {l}")?;
                    }
                    writeln!(f)?;
                }
                Element::Measure { pauli, label } => writeln!(f, "measure {pauli} -> {label}")?,
            }
        }
        Ok(())
    }
}

/// The T-gate injection circuit: qubit 0 holds the magic state, qubit 1 the
/// target `|+>`; after the correction qubit 0 carries `T|+>` and is measured in X.
pub fn injection_circuit(magic: NamedState) -> Circuit {
    let text = format!(
        "qubits 2\nstate {} 0\nstate + 1\ngate CX 0 1\nmeasure IZ -> s\ngate SX 0 if s\nmeasure XI -> out\n",
        magic.name()
    );
    Circuit::parse(&text).expect("static circuit")
}
