// Copyright 2026 The qksvm Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the
// License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
// express or implied. See the License for the specific language governing permissions and
// limitations under the License.

//! Gate and circuit types shared by the simulator, the feature-map builders and
//! the transpiler.
//!
//! A [`Circuit`] is an ordered gate list over `num_qubits` wires. Gates are
//! applied left to right, so the circuit `[g1, g2]` implements the operator
//! `U(g2) * U(g1)`. Qubit indexing is little-endian throughout the crate:
//! qubit 0 is the least significant bit of a basis-state index.
//!
//! Circuits serialize to a JSON object `{num_qubits, gates}` where each gate is
//! `{kind, targets, angle?}` and the angle is written as a decimal string so
//! that serialization round-trips bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The gate alphabet. Rotation angles are radians; `Rz(a) = exp(-i a Z / 2)`
/// and likewise for `Rx`, `Ry`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    /// Hadamard.
    H,
    /// Phase gate `diag(1, e^{i a})`.
    P,
    /// Z rotation.
    Rz,
    /// X rotation.
    Rx,
    /// Y rotation.
    Ry,
    /// Controlled NOT; `targets = [control, target]`.
    Cx,
    /// Controlled Z; symmetric in its two targets.
    Cz,
    /// Pauli X.
    X,
    /// Square root of X, `Sx^2 = X`.
    Sx,
}

impl GateKind {
    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz => 2,
            _ => 1,
        }
    }

    /// Whether the gate carries a rotation angle.
    pub fn takes_angle(self) -> bool {
        matches!(self, GateKind::P | GateKind::Rz | GateKind::Rx | GateKind::Ry)
    }

    /// Wire-format name, also used in error messages.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::P => "p",
            GateKind::Rz => "rz",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::X => "x",
            GateKind::Sx => "sx",
        }
    }

    /// All gate kinds, in wire-name order.
    pub fn all() -> &'static [GateKind] {
        &[
            GateKind::H,
            GateKind::P,
            GateKind::Rz,
            GateKind::Rx,
            GateKind::Ry,
            GateKind::Cx,
            GateKind::Cz,
            GateKind::X,
            GateKind::Sx,
        ]
    }
}

mod angle_serde {
    //! Angles travel as decimal strings. Rust's shortest-round-trip float
    //! formatting guarantees `format!("{v}").parse::<f64>() == v`, which keeps
    //! persisted circuits bit-identical across submit/collect process
    //! boundaries.

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(a) => s.serialize_some(&format!("{a}")),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|t| {
            t.parse::<f64>()
                .map_err(|e| serde::de::Error::custom(format!("bad angle {t:?}: {e}")))
        })
        .transpose()
    }
}

/// One gate instance: a kind, its target qubits and an optional angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "angle_serde")]
    pub angle: Option<f64>,
}

impl Gate {
    pub fn h(q: usize) -> Gate {
        Gate { kind: GateKind::H, targets: vec![q], angle: None }
    }

    pub fn p(angle: f64, q: usize) -> Gate {
        Gate { kind: GateKind::P, targets: vec![q], angle: Some(angle) }
    }

    pub fn rz(angle: f64, q: usize) -> Gate {
        Gate { kind: GateKind::Rz, targets: vec![q], angle: Some(angle) }
    }

    pub fn rx(angle: f64, q: usize) -> Gate {
        Gate { kind: GateKind::Rx, targets: vec![q], angle: Some(angle) }
    }

    pub fn ry(angle: f64, q: usize) -> Gate {
        Gate { kind: GateKind::Ry, targets: vec![q], angle: Some(angle) }
    }

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate { kind: GateKind::Cx, targets: vec![control, target], angle: None }
    }

    pub fn cz(a: usize, b: usize) -> Gate {
        Gate { kind: GateKind::Cz, targets: vec![a, b], angle: None }
    }

    pub fn x(q: usize) -> Gate {
        Gate { kind: GateKind::X, targets: vec![q], angle: None }
    }

    pub fn sx(q: usize) -> Gate {
        Gate { kind: GateKind::Sx, targets: vec![q], angle: None }
    }

    /// Checks arity, angle presence/finiteness and target validity against a
    /// register of `num_qubits` wires.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::Config(format!(
                "gate {} expects {} target(s), got {}",
                self.kind.name(),
                self.kind.arity(),
                self.targets.len()
            )));
        }
        for &t in &self.targets {
            if t >= num_qubits {
                return Err(Error::Config(format!(
                    "gate {} targets qubit {t} but the register has {num_qubits} qubit(s)",
                    self.kind.name()
                )));
            }
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::Config(format!(
                "gate {} targets must be distinct, got {:?}",
                self.kind.name(),
                self.targets
            )));
        }
        match (self.kind.takes_angle(), self.angle) {
            (true, Some(a)) if a.is_finite() => Ok(()),
            (true, Some(a)) => Err(Error::Config(format!(
                "gate {} has non-finite angle {a}",
                self.kind.name()
            ))),
            (true, None) => {
                Err(Error::Config(format!("gate {} requires an angle", self.kind.name())))
            }
            (false, None) => Ok(()),
            (false, Some(_)) => {
                Err(Error::Config(format!("gate {} takes no angle", self.kind.name())))
            }
        }
    }

    /// Inverse of this gate as a short gate sequence.
    ///
    /// Rotations negate their angle and self-inverse gates pass through.
    /// `Sx` has no angle and is not self-inverse; its inverse is emitted as
    /// the pair `[Sx, X]` (apply `Sx` then `X`), which equals `Sx^3 = Sx†`.
    pub fn adjoint(&self) -> Vec<Gate> {
        match self.kind {
            GateKind::H | GateKind::X | GateKind::Cx | GateKind::Cz => vec![self.clone()],
            GateKind::P | GateKind::Rz | GateKind::Rx | GateKind::Ry => vec![Gate {
                kind: self.kind,
                targets: self.targets.clone(),
                angle: self.angle.map(|a| -a),
            }],
            GateKind::Sx => vec![Gate::sx(self.targets[0]), Gate::x(self.targets[0])],
        }
    }
}

/// Ordered gate list over a fixed-width qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Circuit> {
        if num_qubits == 0 {
            return Err(Error::Config("circuit needs at least one qubit".into()));
        }
        Ok(Circuit { num_qubits, gates: Vec::new() })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`; register widths must match.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::Config(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::h(q))?;
        Ok(self)
    }

    pub fn p(&mut self, angle: f64, q: usize) -> Result<&mut Self> {
        self.push(Gate::p(angle, q))?;
        Ok(self)
    }

    pub fn rz(&mut self, angle: f64, q: usize) -> Result<&mut Self> {
        self.push(Gate::rz(angle, q))?;
        Ok(self)
    }

    pub fn rx(&mut self, angle: f64, q: usize) -> Result<&mut Self> {
        self.push(Gate::rx(angle, q))?;
        Ok(self)
    }

    pub fn ry(&mut self, angle: f64, q: usize) -> Result<&mut Self> {
        self.push(Gate::ry(angle, q))?;
        Ok(self)
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::cx(control, target))?;
        Ok(self)
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(Gate::cz(a, b))?;
        Ok(self)
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::x(q))?;
        Ok(self)
    }

    pub fn sx(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::sx(q))?;
        Ok(self)
    }

    /// The inverse circuit: gates reversed, each replaced by its adjoint.
    pub fn adjoint(&self) -> Circuit {
        let gates = self.gates.iter().rev().flat_map(Gate::adjoint).collect();
        Circuit { num_qubits: self.num_qubits, gates }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let c: Circuit = serde_json::from_str(text)?;
        for gate in &c.gates {
            gate.validate(c.num_qubits)?;
        }
        if c.num_qubits == 0 {
            return Err(Error::Config("circuit needs at least one qubit".into()));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_validation_rejects_bad_targets() {
        assert!(Gate::h(2).validate(2).is_err());
        assert!(Gate::cx(1, 1).validate(2).is_err());
        assert!(Gate::cx(0, 1).validate(2).is_ok());
        assert!(Gate { kind: GateKind::H, targets: vec![0, 1], angle: None }.validate(2).is_err());
    }

    #[test]
    fn gate_validation_checks_angles() {
        assert!(Gate { kind: GateKind::Rz, targets: vec![0], angle: None }.validate(1).is_err());
        assert!(Gate { kind: GateKind::X, targets: vec![0], angle: Some(1.0) }
            .validate(1)
            .is_err());
        assert!(Gate::rz(f64::NAN, 0).validate(1).is_err());
        assert!(Gate::rz(0.25, 0).validate(1).is_ok());
    }

    #[test]
    fn adjoint_negates_angles_and_reverses_order() {
        let mut c = Circuit::new(2).unwrap();
        c.h(0).unwrap().rz(0.5, 1).unwrap().cx(0, 1).unwrap();
        let inv = c.adjoint();
        assert_eq!(inv.gates()[0], Gate::cx(0, 1));
        assert_eq!(inv.gates()[1], Gate::rz(-0.5, 1));
        assert_eq!(inv.gates()[2], Gate::h(0));
    }

    #[test]
    fn sx_adjoint_is_sx_then_x() {
        let inv = Gate::sx(3).adjoint();
        assert_eq!(inv, vec![Gate::sx(3), Gate::x(3)]);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut c = Circuit::new(3).unwrap();
        c.h(0)
            .unwrap()
            .rz(std::f64::consts::FRAC_PI_3, 1)
            .unwrap()
            .cx(0, 2)
            .unwrap()
            .p(-1.0e-17, 2)
            .unwrap();
        let json = c.to_json().unwrap();
        let back = Circuit::from_json(&json).unwrap();
        assert_eq!(c, back);
        // Angle survives as the same bits, not merely approximately.
        let a = back.gates()[1].angle.unwrap();
        assert_eq!(a.to_bits(), std::f64::consts::FRAC_PI_3.to_bits());
    }

    #[test]
    fn wire_format_shape() {
        let mut c = Circuit::new(1).unwrap();
        c.rz(0.5, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json().unwrap()).unwrap();
        assert_eq!(v["num_qubits"], 1);
        assert_eq!(v["gates"][0]["kind"], "rz");
        assert_eq!(v["gates"][0]["targets"][0], 0);
        assert_eq!(v["gates"][0]["angle"], "0.5");
    }
}
