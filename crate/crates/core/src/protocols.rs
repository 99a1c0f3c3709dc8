//! Teleportation, superdense coding and quantum information splitting over
//! mirror-state channels, each recorded as an auditable transcript.
//!
//! Qubit numbering inside a protocol workspace: the message or secret comes
//! first (qubits `1..=k`), the channel follows (`k+1..`). Party layouts name
//! channel qubits `1..=2N` as in the channel state itself.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::metrics::subset_entropy;
use crate::qcore::{
    apply_unitary, fidelity, measure_in_basis, partial_trace_pure, MeasureMode, MeasurementOutcome,
    PauliString, QubitSet, StateVector, UnitaryGate, C64, PROBABILITY_TOL,
};
use crate::states::{mirror_basis, mirror_phase_gate, mirror_state, BellState, MirrorBasis};
use crate::{Error, Result};

/// Largest teleported register (the workspace holds `3N` qubits).
pub const MAX_TELEPORT_N: usize = 3;

/// Fidelity a validated correction must reach on every validation input.
const SUCCESS_FIDELITY: f64 = 1.0 - 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
    Charlie,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "Alice",
            Party::Bob => "Bob",
            Party::Charlie => "Charlie",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Measure,
    SendClassical,
    SendQubits,
    ApplyEncoding,
    ApplyCorrection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Outcome { index: usize, outcomes: usize, qubits: QubitSet, label: String },
    Bits { bits: String, to: Party },
    Qubits { qubits: QubitSet, to: Party },
    Operation { operation: String, qubits: QubitSet },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    /// Enumeration branch the event belongs to.
    pub branch: usize,
    pub actor: Party,
    pub action: Action,
    pub payload: Payload,
    /// For measurements: probability conditioned on earlier events of the branch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
}

/// Ordered record of one protocol run, possibly over several branches.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub protocol: String,
    pub events: Vec<Event>,
}

impl ProtocolTranscript {
    pub fn new(protocol: &str) -> Self {
        ProtocolTranscript { protocol: protocol.to_string(), events: Vec::new() }
    }

    fn push(&mut self, branch: usize, actor: Party, action: Action, payload: Payload, probability: Option<f64>) {
        self.events.push(Event { branch, actor, action, payload, probability });
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> Result<String> {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn branches(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.events.iter().map(|e| e.branch).collect();
        b.dedup();
        b
    }

    /// Every classical message carries `log2(outcomes)` bits of the sender's
    /// preceding measurement in the same branch.
    pub fn classical_bits_consistent(&self) -> bool {
        let mut last: BTreeMap<(usize, Party), usize> = BTreeMap::new();
        for e in &self.events {
            match (&e.action, &e.payload) {
                (Action::Measure, Payload::Outcome { outcomes, .. }) => {
                    last.insert((e.branch, e.actor), *outcomes);
                }
                (Action::SendClassical, Payload::Bits { bits, .. }) => match last.remove(&(e.branch, e.actor)) {
                    Some(count) if count.is_power_of_two() && count.trailing_zeros() as usize == bits.len() => {}
                    _ => return false,
                },
                _ => {}
            }
        }
        true
    }

    /// Classical bits sent in `branch`.
    pub fn classical_bits(&self, branch: usize) -> usize {
        self.events
            .iter()
            .filter(|e| e.branch == branch)
            .map(|e| match &e.payload {
                Payload::Bits { bits, .. } => bits.len(),
                _ => 0,
            })
            .sum()
    }

    /// Qubits physically sent in `branch`.
    pub fn qubits_sent(&self, branch: usize) -> usize {
        self.events
            .iter()
            .filter(|e| e.branch == branch)
            .map(|e| match &e.payload {
                Payload::Qubits { qubits, .. } => qubits.len(),
                _ => 0,
            })
            .sum()
    }

    /// Sum over branches of the product of measurement probabilities.
    pub fn total_probability(&self) -> f64 {
        let mut per_branch: BTreeMap<usize, f64> = BTreeMap::new();
        for e in &self.events {
            if let Some(p) = e.probability {
                *per_branch.entry(e.branch).or_insert(1.0) *= p;
            }
        }
        per_branch.values().sum()
    }
}

fn bit_string(value: usize, width: usize) -> String {
    (0..width).rev().map(|b| if (value >> b) & 1 == 1 { '1' } else { '0' }).collect()
}

fn shift_qubits(set: &QubitSet, offset: usize) -> QubitSet {
    QubitSet::new(set.members().iter().map(|q| q + offset).collect::<Vec<_>>()).expect("shift keeps distinct")
}

fn validation_inputs(k: usize) -> Result<Vec<StateVector>> {
    let mut inputs: Vec<StateVector> = (0..1usize << k).map(|i| StateVector::basis(k, i)).collect::<Result<_>>()?;
    inputs.push(StateVector::uniform(k)?);
    Ok(inputs)
}

fn check_normalized(state: &StateVector) -> Result<()> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Teleportation
// ---------------------------------------------------------------------------

/// Unitary Bob applies to his residual: the optional N-qubit controlled
/// phase, then a Pauli word on his qubits (numbered `1..=N` locally).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeleportCorrection {
    pub controlled_phase: bool,
    pub pauli: PauliString,
}

impl TeleportCorrection {
    pub fn apply(&self, residual: &StateVector) -> Result<StateVector> {
        let mut s = residual.clone();
        if self.controlled_phase {
            s = apply_unitary(&s, &mirror_phase_gate(s.num_qubits())?)?;
        }
        self.pauli.apply(&s)
    }

    pub fn describe(&self) -> String {
        let word = self.pauli.label();
        if self.controlled_phase {
            format!("{word}*CP")
        } else {
            word
        }
    }
}

/// Outcome index of Alice's mirror-basis measurement to Bob's correction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionTable {
    pub n: usize,
    pub entries: BTreeMap<usize, TeleportCorrection>,
}

impl CorrectionTable {
    pub fn get(&self, outcome: usize) -> Result<&TeleportCorrection> {
        self.entries.get(&outcome).ok_or(Error::Construction(format!("no correction for outcome {outcome}")))
    }

    /// Entries whose Pauli word differs from the outcome label.
    pub fn nontrivial_relabels(&self) -> usize {
        self.entries.iter().filter(|(k, c)| c.pauli.index() != **k || c.controlled_phase).count()
    }

    pub fn uses_controlled_phase(&self) -> bool {
        self.entries.values().any(|c| c.controlled_phase)
    }
}

fn check_teleport_size(n: usize) -> Result<()> {
    if (1..=MAX_TELEPORT_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("teleport register N = {n} outside 1..={MAX_TELEPORT_N}")))
    }
}

/// Alice's qubits in the teleport workspace: the input and channel `1..=N`.
fn teleport_alice(n: usize) -> QubitSet {
    QubitSet::range(1, 2 * n)
}

fn teleport_measure(input: &StateVector, basis: &MirrorBasis, mode: MeasureMode) -> Result<Vec<MeasurementOutcome>> {
    let n = basis.n;
    let composite = input.tensor(&mirror_state(n)?)?;
    measure_in_basis(&composite, &teleport_alice(n), &basis.states, mode)
}

/// Teleports each computational ket and the uniform superposition, then for
/// every outcome finds the correction that restores all of them.
pub fn build_correction_table(n: usize) -> Result<CorrectionTable> {
    check_teleport_size(n)?;
    let basis = mirror_basis(n)?;
    let inputs = validation_inputs(n)?;
    let runs = inputs
        .iter()
        .map(|v| teleport_measure(v, &basis, MeasureMode::Enumerate))
        .collect::<Result<Vec<_>>>()?;
    let bob: Vec<usize> = (1..=n).collect();
    let mut candidates = Vec::new();
    for controlled_phase in [false, true] {
        for pauli in PauliString::all(&bob)? {
            candidates.push(TeleportCorrection { controlled_phase, pauli });
        }
    }
    let mut entries = BTreeMap::new();
    for outcome in 0..basis.len() {
        let residuals: Vec<&StateVector> = runs
            .iter()
            .map(|run| {
                run.iter()
                    .find(|o| o.index == outcome)
                    .map(|o| &o.residual)
                    .ok_or(Error::Construction(format!("outcome {outcome} missing for a validation input")))
            })
            .collect::<Result<_>>()?;
        // Try the outcome's own label first.
        let order = std::iter::once(outcome).chain((0..candidates.len()).filter(|&i| i != outcome));
        let mut found = None;
        for i in order {
            let c = &candidates[i];
            let ok = residuals.iter().zip(&inputs).try_fold(true, |acc, (r, v)| -> Result<bool> {
                Ok(acc && fidelity(&c.apply(r)?, v)? >= SUCCESS_FIDELITY)
            })?;
            if ok {
                found = Some(c.clone());
                break;
            }
        }
        let c = found.ok_or(Error::Construction(format!("no correction restores outcome {outcome}")))?;
        entries.insert(outcome, c);
    }
    Ok(CorrectionTable { n, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportBranch {
    pub outcome: usize,
    pub label: String,
    pub probability: f64,
    pub correction: String,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportRun {
    pub n: usize,
    pub transcript: ProtocolTranscript,
    pub branches: Vec<TeleportBranch>,
}

impl TeleportRun {
    pub fn min_fidelity(&self) -> f64 {
        self.branches.iter().map(|b| b.fidelity).fold(f64::INFINITY, f64::min)
    }

    /// Largest deviation of a branch probability from `4^-N`.
    pub fn max_probability_deviation(&self) -> f64 {
        let uniform = 1.0 / (1usize << (2 * self.n)) as f64;
        self.branches.iter().map(|b| (b.probability - uniform).abs()).fold(0.0, f64::max)
    }
}

/// Teleports an N-qubit input through `mirror_state(N)`.
pub fn teleport(input: &StateVector, n: usize, mode: MeasureMode) -> Result<TeleportRun> {
    let table = build_correction_table(n)?;
    teleport_with_table(input, &table, mode)
}

pub fn teleport_with_table(input: &StateVector, table: &CorrectionTable, mode: MeasureMode) -> Result<TeleportRun> {
    let n = table.n;
    check_teleport_size(n)?;
    if input.num_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, got: input.num_qubits() });
    }
    check_normalized(input)?;
    let basis = mirror_basis(n)?;
    let outcomes = teleport_measure(input, &basis, mode)?;
    let alice = teleport_alice(n);
    let bob_global = QubitSet::range(2 * n + 1, 3 * n);
    let mut transcript = ProtocolTranscript::new("teleport");
    let mut branches = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        let label = basis.labels[o.index].label();
        let correction = table.get(o.index)?;
        let restored = correction.apply(&o.residual)?;
        let f = fidelity(&restored, input)?;
        transcript.push(
            o.index,
            Party::Alice,
            Action::Measure,
            Payload::Outcome { index: o.index, outcomes: basis.len(), qubits: alice.clone(), label: label.clone() },
            Some(o.probability),
        );
        transcript.push(
            o.index,
            Party::Alice,
            Action::SendClassical,
            Payload::Bits { bits: bit_string(o.index, 2 * n), to: Party::Bob },
            None,
        );
        transcript.push(
            o.index,
            Party::Bob,
            Action::ApplyCorrection,
            Payload::Operation { operation: correction.describe(), qubits: bob_global.clone() },
            None,
        );
        branches.push(TeleportBranch {
            outcome: o.index,
            label,
            probability: o.probability,
            correction: correction.describe(),
            fidelity: f,
        });
    }
    Ok(TeleportRun { n, transcript, branches })
}

/// Kets of the three-qubit worked example, in coefficient order
/// `α1..α8`.
pub const WORKED_EXAMPLE_KETS: [usize; 8] = [0b000, 0b001, 0b011, 0b111, 0b110, 0b101, 0b100, 0b010];

/// Three-qubit input `Σ α_m |ket_m>` with the worked-example ket order.
pub fn worked_example_input(alphas: &[C64; 8]) -> Result<StateVector> {
    let mut a = vec![C64::new(0.0, 0.0); 8];
    for (alpha, &ket) in alphas.iter().zip(&WORKED_EXAMPLE_KETS) {
        a[ket] = *alpha;
    }
    StateVector::new(3, a)
}

/// Quoted six-qubit outcome of the worked example, over Alice's three input
/// qubits followed by her three channel qubits.
pub const QUOTED_OUTCOME_KETS: [usize; 8] =
    [0b000100, 0b001000, 0b011111, 0b111110, 0b100001, 0b100011, 0b101010, 0b010101];

/// Quoted collapse of Bob's register for that outcome, in `α1..α8` order:
/// `(sign, ket)`.
pub const QUOTED_COLLAPSE: [(i8, usize); 8] = [
    (1, 0b001),
    (1, 0b000),
    (-1, 0b111),
    (1, 0b011),
    (1, 0b100),
    (1, 0b110),
    (1, 0b010),
    (1, 0b100),
];

/// Where one input coefficient ends up in Bob's register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseTerm {
    pub coefficient: usize,
    pub sign: f64,
    pub ket: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkedExampleReport {
    /// Largest `|<φ_x|quoted>|²` over Alice's 64 mirror-basis outcomes.
    pub quoted_max_overlap: f64,
    pub best_outcome: usize,
    pub best_label: String,
    /// Whether the quoted register repeats a ket (so it cannot be unitary).
    pub quoted_collapse_repeats_ket: bool,
    /// Simulated collapse for the best outcome, before correction.
    pub simulated_collapse: Vec<CollapseTerm>,
    pub correction: String,
}

/// Compares the quoted N = 3 outcome and collapse with the simulation.
pub fn worked_example_analysis() -> Result<WorkedExampleReport> {
    let basis = mirror_basis(3)?;
    let amp = C64::new(1.0 / 8f64.sqrt(), 0.0);
    let mut quoted = vec![C64::new(0.0, 0.0); 64];
    for &k in &QUOTED_OUTCOME_KETS {
        quoted[k] += amp;
    }
    let quoted = StateVector::new(6, quoted)?;
    let overlaps = basis.states.iter().map(|b| fidelity(b, &quoted)).collect::<Result<Vec<_>>>()?;
    let (best_outcome, quoted_max_overlap) =
        overlaps.iter().cloned().enumerate().fold((0, -1.0), |acc, (i, v)| if v > acc.1 + 1e-12 { (i, v) } else { acc });

    let mut seen = std::collections::BTreeSet::new();
    let quoted_collapse_repeats_ket = QUOTED_COLLAPSE.iter().any(|(_, k)| !seen.insert(*k));

    let mut simulated_collapse = Vec::new();
    for (m, &ket) in WORKED_EXAMPLE_KETS.iter().enumerate() {
        let input = StateVector::basis(3, ket)?;
        let outcomes = teleport_measure(&input, &basis, MeasureMode::Enumerate)?;
        let o = outcomes
            .iter()
            .find(|o| o.index == best_outcome)
            .ok_or(Error::Construction("outcome missing".into()))?;
        let (idx, a) = o
            .residual
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .expect("nonempty");
        simulated_collapse.push(CollapseTerm { coefficient: m + 1, sign: a.re.signum(), ket: bit_string(idx, 3) });
    }
    let table = build_correction_table(3)?;
    Ok(WorkedExampleReport {
        quoted_max_overlap,
        best_outcome,
        best_label: basis.labels[best_outcome].label(),
        quoted_collapse_repeats_ket,
        simulated_collapse,
        correction: table.get(best_outcome)?.describe(),
    })
}

// ---------------------------------------------------------------------------
// Superdense coding
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperdenseRun {
    pub n: usize,
    pub message: String,
    pub decoded: String,
    pub transcript: ProtocolTranscript,
}

fn parse_bits(message: &str) -> Result<usize> {
    if message.is_empty() || message.len() > 2 * crate::states::MAX_HALF_SIZE {
        return Err(Error::InvalidArgument(format!("message '{message}' has unsupported length")));
    }
    message.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(Error::InvalidArgument(format!("message bit '{other}'"))),
    })
}

/// Encodes `2N` bits as a Pauli word on Alice's qubits `1..=N`, sends them,
/// and decodes with Bob's mirror-basis measurement.
pub fn superdense_send(message: &str, n: usize) -> Result<SuperdenseRun> {
    let basis = mirror_basis(n)?;
    superdense_with_basis(message, &basis)
}

pub fn superdense_with_basis(message: &str, basis: &MirrorBasis) -> Result<SuperdenseRun> {
    let n = basis.n;
    if message.len() != 2 * n {
        return Err(Error::InvalidArgument(format!("message has {} bits, expected {}", message.len(), 2 * n)));
    }
    let word = parse_bits(message)?;
    let alice = QubitSet::range(1, n);
    let encoding = PauliString::from_index(word, alice.members())?;
    let sent = encoding.apply(&basis.states[0])?;
    let all = QubitSet::range(1, 2 * n);
    let outcome = measure_in_basis(&sent, &all, &basis.states, MeasureMode::Enumerate)?;
    let o = match outcome.as_slice() {
        [single] => single,
        _ => return Err(Error::Construction(format!("{} outcomes for an encoded basis state", outcome.len()))),
    };
    let decoded = bit_string(o.index, 2 * n);
    let mut transcript = ProtocolTranscript::new("superdense");
    transcript.push(
        0,
        Party::Alice,
        Action::ApplyEncoding,
        Payload::Operation { operation: encoding.label(), qubits: alice.clone() },
        None,
    );
    transcript.push(0, Party::Alice, Action::SendQubits, Payload::Qubits { qubits: alice, to: Party::Bob }, None);
    transcript.push(
        0,
        Party::Bob,
        Action::Measure,
        Payload::Outcome { index: o.index, outcomes: basis.len(), qubits: all, label: basis.labels[o.index].label() },
        Some(o.probability),
    );
    Ok(SuperdenseRun { n, message: message.to_string(), decoded, transcript })
}

/// Round-trips all `4^N` messages; returns the number of decode errors.
pub fn superdense_exhaustive(n: usize) -> Result<usize> {
    let basis = mirror_basis(n)?;
    let mut errors = 0;
    for word in 0..basis.len() {
        let message = bit_string(word, 2 * n);
        if superdense_with_basis(&message, &basis)?.decoded != message {
            errors += 1;
        }
    }
    Ok(errors)
}

// ---------------------------------------------------------------------------
// Quantum information splitting
// ---------------------------------------------------------------------------

/// Assignment of channel qubits to parties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartyLayout {
    pub assignments: Vec<(Party, QubitSet)>,
}

impl PartyLayout {
    /// Validates that the sets partition channel qubits `1..=num_qubits`.
    pub fn new(assignments: Vec<(Party, QubitSet)>, num_qubits: usize) -> Result<Self> {
        let mut seen = vec![false; num_qubits + 1];
        for (party, set) in &assignments {
            set.check(num_qubits)?;
            for &q in set.members() {
                if seen[q] {
                    return Err(Error::InvalidArgument(format!("qubit {q} assigned twice ({party})")));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = (1..=num_qubits).find(|&q| !seen[q]) {
            return Err(Error::InvalidArgument(format!("qubit {q} not assigned")));
        }
        let mut parties: Vec<Party> = assignments.iter().map(|(p, _)| *p).collect();
        parties.sort();
        parties.dedup();
        if parties.len() != assignments.len() {
            return Err(Error::InvalidArgument("party listed twice".into()));
        }
        Ok(PartyLayout { assignments })
    }

    pub fn three_party(alice: &[usize], bob: &[usize], charlie: &[usize], num_qubits: usize) -> Result<Self> {
        Self::new(
            vec![
                (Party::Alice, QubitSet::new(alice.to_vec())?.sorted()),
                (Party::Bob, QubitSet::new(bob.to_vec())?.sorted()),
                (Party::Charlie, QubitSet::new(charlie.to_vec())?.sorted()),
            ],
            num_qubits,
        )
    }

    /// Parses `"1,2,3/4/5,6"` as Alice/Bob/Charlie.
    pub fn parse(text: &str, num_qubits: usize) -> Result<Self> {
        let parts: Vec<&str> = text.split('/').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!("layout '{text}' needs three '/'-separated groups")));
        }
        let sets = parts.iter().map(|p| QubitSet::parse(p)).collect::<Result<Vec<_>>>()?;
        Self::three_party(sets[0].members(), sets[1].members(), sets[2].members(), num_qubits)
    }

    pub fn qubits(&self, party: Party) -> Result<&QubitSet> {
        self.assignments
            .iter()
            .find(|(p, _)| *p == party)
            .map(|(_, s)| s)
            .ok_or(Error::InvalidArgument(format!("{party} has no qubits")))
    }

    pub fn num_qubits(&self) -> usize {
        self.assignments.iter().map(|(_, s)| s.len()).sum()
    }
}

impl fmt::Display for PartyLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .assignments
            .iter()
            .map(|(_, s)| s.members().iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&groups.join("/"))
    }
}

/// Alice's measurement basis for splitting a `k`-qubit secret with `m`
/// channel qubits, over (secret `1..=k`, channel qubits in layout order).
#[derive(Clone, Debug)]
pub struct QisBasis {
    pub k: usize,
    pub m: usize,
    pub states: Vec<StateVector>,
    pub labels: Vec<String>,
}

/// `CX(s_k -> s_1) · (Bell(s_1,c_1) ⊗ … ⊗ Bell(s_{k-1},c_{k-1}) ⊗ GHZ(s_k, c_k..c_m))`
/// over the full Bell and GHZ bases.
pub fn qis_alice_basis(k: usize, m: usize) -> Result<QisBasis> {
    if k == 0 || m < k || k + m > crate::qcore::MAX_QUBITS {
        return Err(Error::Unsupported(format!("QIS basis for k = {k}, m = {m}")));
    }
    let total = k + m;
    let g = m - k + 2;
    let ghz_count = 1usize << g;
    let bell_count = 1usize << (2 * (k - 1));
    let mut states = Vec::with_capacity(bell_count * ghz_count);
    let mut labels = Vec::with_capacity(bell_count * ghz_count);
    let bit = |idx: usize, q: usize| (idx >> (total - q)) & 1;
    for bells in 0..bell_count {
        for ghz in 0..ghz_count {
            let pattern = ghz >> 1;
            let positive = ghz & 1 == 0;
            let bell_states: Vec<BellState> =
                (0..k - 1).map(|j| BellState::ALL[(bells >> (2 * (k - 2 - j))) & 3]).collect();
            let bell_vectors: Vec<StateVector> = bell_states.iter().map(|b| b.state()).collect();
            let ghz_vector = crate::states::ghz_state(g, pattern, positive)?;
            let amps: Vec<C64> = (0..1usize << total)
                .map(|idx| {
                    let mut a = C64::new(1.0, 0.0);
                    for (j, bv) in bell_vectors.iter().enumerate() {
                        let s = bit(idx, j + 1);
                        let c = bit(idx, k + j + 1);
                        a *= bv.amplitude((s << 1) | c);
                    }
                    let mut gi = bit(idx, k);
                    for c in k..=m {
                        gi = (gi << 1) | bit(idx, k + c);
                    }
                    a * ghz_vector.amplitude(gi)
                })
                .collect();
            let mut state = StateVector::new(total, amps)?;
            if k >= 2 {
                state = apply_unitary(&state, &UnitaryGate::cnot(k, 1)?)?;
            }
            let mut label: Vec<String> = bell_states.iter().map(|b| format!("{b:?}")).collect();
            label.push(format!("GHZ{}({})", if positive { '+' } else { '-' }, bit_string(pattern, g)));
            labels.push(label.join("*"));
            states.push(state);
        }
    }
    Ok(QisBasis { k, m, states, labels })
}

/// Charlie's correction: a CZ layer, a linear reversible wire map
/// `|x> -> |Ax>`, then a Pauli word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharlieCorrection {
    pub cz: bool,
    /// Rows of the binary matrix `A`.
    pub wire_map: Vec<Vec<u8>>,
    pub pauli: PauliString,
    #[serde(skip)]
    matrix: Option<DMatrix<C64>>,
}

impl CharlieCorrection {
    pub fn describe(&self) -> String {
        let rows: Vec<String> = self.wire_map.iter().map(|r| r.iter().map(|b| b.to_string()).collect()).collect();
        format!("{}*L[{}]{}", self.pauli.label(), rows.join(","), if self.cz { "*CZ" } else { "" })
    }

    fn apply_vec(&self, v: &StateVector) -> StateVector {
        let m = self.matrix.as_ref().expect("built with matrix");
        let out = m * DVector::from_column_slice(v.amplitudes());
        StateVector::new(v.num_qubits(), out.as_slice().to_vec()).expect("unitary image")
    }
}

fn pauli_matrix(word: &PauliString) -> DMatrix<C64> {
    let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for p in word.ops() {
        let g = match p.gate(1) {
            Some(g) => g.matrix().clone(),
            None => DMatrix::identity(2, 2),
        };
        m = m.kronecker(&g);
    }
    m
}

/// Invertible binary `k × k` matrices, `k <= 2`.
fn wire_maps(k: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    for code in 0..1usize << (k * k) {
        let rows: Vec<Vec<u8>> =
            (0..k).map(|r| (0..k).map(|c| ((code >> (r * k + c)) & 1) as u8).collect()).collect();
        let images: std::collections::BTreeSet<usize> = (0..1usize << k).map(|x| apply_wire_map(&rows, x, k)).collect();
        if images.len() == 1 << k {
            out.push(rows);
        }
    }
    out
}

fn apply_wire_map(rows: &[Vec<u8>], x: usize, k: usize) -> usize {
    let bits: Vec<usize> = (0..k).map(|i| (x >> (k - 1 - i)) & 1).collect();
    rows.iter().fold(0, |acc, row| {
        let b = row.iter().zip(&bits).map(|(a, b)| *a as usize & b).sum::<usize>() & 1;
        (acc << 1) | b
    })
}

fn charlie_candidates(k: usize) -> Result<Vec<CharlieCorrection>> {
    let dim = 1usize << k;
    let targets: Vec<usize> = (1..=k).collect();
    let mut out = Vec::new();
    for cz in [false, true] {
        if cz && k < 2 {
            continue;
        }
        let d = DMatrix::from_fn(dim, dim, |r, c| {
            let sign = if cz && r == c && (r >> (k - 1)) & 1 == 1 && (r >> (k - 2)) & 1 == 1 { -1.0 } else { 1.0 };
            C64::new(if r == c { sign } else { 0.0 }, 0.0)
        });
        for rows in wire_maps(k) {
            let l = DMatrix::from_fn(dim, dim, |r, c| {
                C64::new(if apply_wire_map(&rows, c, k) == r { 1.0 } else { 0.0 }, 0.0)
            });
            for pauli in PauliString::all(&targets)? {
                let m = pauli_matrix(&pauli) * &l * &d;
                out.push(CharlieCorrection { cz, wire_map: rows.clone(), pauli, matrix: Some(m) });
            }
        }
    }
    Ok(out)
}

/// State after Alice's measurement and after Bob's.
struct QisBranchState {
    alice: usize,
    alice_probability: f64,
    bob: usize,
    bob_probability: f64,
    bob_charlie: StateVector,
    charlie: StateVector,
}

struct QisSetup {
    k: usize,
    alice_workspace: QubitSet,
    bob_local: QubitSet,
    basis: QisBasis,
    bob_basis: Vec<StateVector>,
}

fn qis_setup(k: usize, channel: &StateVector, layout: &PartyLayout) -> Result<QisSetup> {
    let n2 = channel.num_qubits();
    if layout.num_qubits() != n2 {
        return Err(Error::InvalidArgument(format!("layout covers {} of {n2} channel qubits", layout.num_qubits())));
    }
    let alice = layout.qubits(Party::Alice)?;
    let bob = layout.qubits(Party::Bob)?;
    let basis = qis_alice_basis(k, alice.len())?;
    let mut alice_workspace: Vec<usize> = (1..=k).collect();
    alice_workspace.extend(shift_qubits(alice, k).members());
    // Remaining channel qubits after Alice, ascending; Bob's positions in it.
    let remaining: Vec<usize> = (1..=n2).filter(|q| !alice.contains(*q)).collect();
    let bob_local: Vec<usize> = bob
        .members()
        .iter()
        .map(|q| remaining.iter().position(|r| r == q).expect("bob in remaining") + 1)
        .collect();
    let b = bob.len();
    let bob_basis = (0..1usize << b)
        .map(|j| {
            let mut s = StateVector::basis(b, j)?;
            for q in 1..=b {
                s = apply_unitary(&s, &UnitaryGate::hadamard(q))?;
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QisSetup {
        k,
        alice_workspace: QubitSet::new(alice_workspace)?,
        bob_local: QubitSet::new(bob_local)?,
        basis,
        bob_basis,
    })
}

fn qis_branches(secret: &StateVector, channel: &StateVector, setup: &QisSetup) -> Result<Vec<QisBranchState>> {
    let composite = secret.tensor(channel)?;
    let alice_outcomes = measure_in_basis(&composite, &setup.alice_workspace, &setup.basis.states, MeasureMode::Enumerate)?;
    let mut out = Vec::new();
    for a in alice_outcomes {
        let bob_outcomes = measure_in_basis(&a.residual, &setup.bob_local, &setup.bob_basis, MeasureMode::Enumerate)?;
        for b in bob_outcomes {
            out.push(QisBranchState {
                alice: a.index,
                alice_probability: a.probability,
                bob: b.index,
                bob_probability: b.probability,
                bob_charlie: a.residual.clone(),
                charlie: b.residual,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QisBranch {
    pub alice_outcome: usize,
    pub alice_label: String,
    pub bob_outcome: usize,
    pub probability: f64,
    pub correction: String,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QisRun {
    pub layout: String,
    pub transcript: ProtocolTranscript,
    pub branches: Vec<QisBranch>,
    /// Bob-Charlie state after each Alice outcome, over the remaining
    /// channel qubits in ascending order.
    #[serde(skip)]
    pub bob_charlie_states: Vec<(usize, StateVector)>,
    /// Largest purity of Bob's or Charlie's reduced state after Alice's
    /// measurement, before any classical message.
    pub max_single_party_purity: f64,
    /// Whether Charlie's correction depends on Bob's outcome for some Alice
    /// outcome. Without it the secret reaches Charlie by plain teleportation.
    pub bob_required: bool,
}

impl QisRun {
    pub fn min_fidelity(&self) -> f64 {
        self.branches.iter().map(|b| b.fidelity).fold(f64::INFINITY, f64::min)
    }
}

/// Correction per (Alice outcome, Bob outcome), solved on the validation
/// inputs and checked on all of them.
fn solve_charlie_table(
    channel: &StateVector,
    setup: &QisSetup,
) -> Result<BTreeMap<(usize, usize), CharlieCorrection>> {
    let k = setup.k;
    if k > 2 {
        return Err(Error::Unsupported(format!("Charlie correction search for a {k}-qubit secret")));
    }
    let inputs = validation_inputs(k)?;
    let runs = inputs.iter().map(|v| qis_branches(v, channel, setup)).collect::<Result<Vec<_>>>()?;
    let candidates = charlie_candidates(k)?;
    let mut keys: Vec<(usize, usize)> = runs.iter().flatten().map(|b| (b.alice, b.bob)).collect();
    keys.sort();
    keys.dedup();
    let mut table = BTreeMap::new();
    for key in keys {
        let residuals: Vec<&StateVector> = runs
            .iter()
            .map(|run| {
                run.iter()
                    .find(|b| (b.alice, b.bob) == key)
                    .map(|b| &b.charlie)
                    .ok_or(Error::Construction(format!("branch {key:?} missing for a validation input")))
            })
            .collect::<Result<_>>()?;
        let found = candidates.iter().find(|c| {
            residuals
                .iter()
                .zip(&inputs)
                .all(|(r, v)| fidelity(&c.apply_vec(r), v).map(|f| f >= SUCCESS_FIDELITY).unwrap_or(false))
        });
        let c = found.ok_or(Error::Construction(format!("no Charlie correction for branch {key:?}")))?;
        table.insert(key, c.clone());
    }
    Ok(table)
}

/// Splits a `k`-qubit secret over `channel`: Alice measures the secret and
/// her qubits jointly, Bob measures his in the `±` basis, Charlie corrects.
pub fn qis_split(secret: &StateVector, channel: &StateVector, layout: &PartyLayout) -> Result<QisRun> {
    check_normalized(secret)?;
    let k = secret.num_qubits();
    let charlie = layout.qubits(Party::Charlie)?;
    if charlie.len() != k {
        return Err(Error::Unsupported(format!("Charlie holds {} qubits for a {k}-qubit secret", charlie.len())));
    }
    if layout.qubits(Party::Bob)?.is_empty() {
        return Err(Error::Unsupported("Bob holds no qubits".into()));
    }
    let setup = qis_setup(k, channel, layout)?;
    let table = solve_charlie_table(channel, &setup)?;
    let branches_state = qis_branches(secret, channel, &setup)?;

    let alice_global = QubitSet::new(
        (1..=k).chain(shift_qubits(layout.qubits(Party::Alice)?, k).members().iter().cloned()).collect::<Vec<_>>(),
    )?;
    let bob_global = shift_qubits(layout.qubits(Party::Bob)?, k);
    let charlie_global = shift_qubits(charlie, k);
    let bob_count = setup.bob_basis.len();

    let mut transcript = ProtocolTranscript::new("qis");
    let mut branches = Vec::new();
    let mut bob_charlie_states: Vec<(usize, StateVector)> = Vec::new();
    let mut max_purity = 0.0f64;
    for (i, b) in branches_state.iter().enumerate() {
        let correction = table
            .get(&(b.alice, b.bob))
            .ok_or(Error::Construction(format!("branch ({}, {}) outside the solved table", b.alice, b.bob)))?;
        let restored = correction.apply_vec(&b.charlie);
        let f = fidelity(&restored, secret)?;
        let alice_label = setup.basis.labels[b.alice].clone();
        if bob_charlie_states.last().map(|(a, _)| *a) != Some(b.alice) {
            let rest = b.bob_charlie.num_qubits();
            let bob_side = &setup.bob_local;
            let charlie_side = bob_side.complement(rest);
            for side in [bob_side, &charlie_side] {
                max_purity = max_purity.max(partial_trace_pure(&b.bob_charlie, side)?.purity());
            }
            bob_charlie_states.push((b.alice, b.bob_charlie.clone()));
        }
        transcript.push(
            i,
            Party::Alice,
            Action::Measure,
            Payload::Outcome {
                index: b.alice,
                outcomes: setup.basis.states.len(),
                qubits: alice_global.clone(),
                label: alice_label.clone(),
            },
            Some(b.alice_probability),
        );
        transcript.push(
            i,
            Party::Alice,
            Action::SendClassical,
            Payload::Bits { bits: bit_string(b.alice, setup.basis.states.len().trailing_zeros() as usize), to: Party::Charlie },
            None,
        );
        transcript.push(
            i,
            Party::Bob,
            Action::Measure,
            Payload::Outcome {
                index: b.bob,
                outcomes: bob_count,
                qubits: bob_global.clone(),
                label: bit_string(b.bob, bob_count.trailing_zeros() as usize).replace('0', "+").replace('1', "-"),
            },
            Some(b.bob_probability),
        );
        transcript.push(
            i,
            Party::Bob,
            Action::SendClassical,
            Payload::Bits { bits: bit_string(b.bob, bob_count.trailing_zeros() as usize), to: Party::Charlie },
            None,
        );
        transcript.push(
            i,
            Party::Charlie,
            Action::ApplyCorrection,
            Payload::Operation { operation: correction.describe(), qubits: charlie_global.clone() },
            None,
        );
        branches.push(QisBranch {
            alice_outcome: b.alice,
            alice_label,
            bob_outcome: b.bob,
            probability: b.alice_probability * b.bob_probability,
            correction: correction.describe(),
            fidelity: f,
        });
    }
    let mut per_alice: BTreeMap<usize, std::collections::BTreeSet<&str>> = BTreeMap::new();
    for b in &branches {
        per_alice.entry(b.alice_outcome).or_default().insert(b.correction.as_str());
    }
    let bob_required = per_alice.values().any(|c| c.len() > 1);
    Ok(QisRun {
        layout: layout.to_string(),
        transcript,
        branches,
        bob_charlie_states,
        max_single_party_purity: max_purity,
        bob_required,
    })
}

/// Minimum over Alice's outcomes of the Bob-vs-Charlie entanglement entropy
/// left in the channel, with `|+>^k` as the probe secret. Zero means some
/// outcome leaves Bob and Charlie in a product state.
pub fn qis_feasibility(channel: &StateVector, layout: &PartyLayout, k: usize) -> Result<f64> {
    let setup = qis_setup(k, channel, layout)?;
    let probe = StateVector::uniform(k)?;
    let composite = probe.tensor(channel)?;
    let outcomes = measure_in_basis(&composite, &setup.alice_workspace, &setup.basis.states, MeasureMode::Enumerate)?;
    let mut worst = f64::INFINITY;
    for o in outcomes {
        worst = worst.min(subset_entropy(&o.residual, &setup.bob_local)?);
    }
    Ok(worst.max(0.0))
}

/// Purity of each party's share of the channel before any measurement.
pub fn single_party_purities(channel: &StateVector, layout: &PartyLayout) -> Result<Vec<(Party, f64)>> {
    layout
        .assignments
        .iter()
        .map(|(p, set)| Ok((*p, partial_trace_pure(channel, set)?.purity())))
        .collect()
}

/// The two-qubit secret collapse `α00|000> - α01|111> + α10|001> + α11|110>`
/// on Bob-Charlie qubits, normalized.
pub fn quoted_qis_collapse(secret: &StateVector) -> Result<StateVector> {
    if secret.num_qubits() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: secret.num_qubits() });
    }
    let a = secret.amplitudes();
    let mut v = vec![C64::new(0.0, 0.0); 8];
    v[0b000] += a[0b00];
    v[0b111] -= a[0b01];
    v[0b001] += a[0b10];
    v[0b110] += a[0b11];
    StateVector::normalized(3, v)
}

/// Probability-weighted check that an enumeration is complete.
pub fn enumeration_complete(probabilities: impl IntoIterator<Item = f64>) -> bool {
    (probabilities.into_iter().sum::<f64>() - 1.0).abs() <= PROBABILITY_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::rearranged_bell;
    use rand::SeedableRng;

    fn random_state(seed: u64, n: usize) -> StateVector {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        StateVector::random(n, &mut rng).unwrap()
    }

    fn main_layout() -> PartyLayout {
        PartyLayout::three_party(&[1, 2, 3], &[4], &[5, 6], 6).unwrap()
    }

    #[test]
    fn correction_table_small() {
        let t = build_correction_table(1).unwrap();
        assert_eq!(t.entries.len(), 4);
        assert_eq!(t.get(0).unwrap().describe(), "I");
        for n in 1..=3 {
            let t = build_correction_table(n).unwrap();
            assert!(!t.uses_controlled_phase());
            assert_eq!(t.nontrivial_relabels(), 0, "N = {n}");
        }
    }

    #[test]
    fn teleport_random_inputs() {
        for n in 1..=3 {
            let table = build_correction_table(n).unwrap();
            for seed in 0..3 {
                let run = teleport_with_table(&random_state(seed, n), &table, MeasureMode::Enumerate).unwrap();
                assert_eq!(run.branches.len(), 1 << (2 * n));
                assert!(run.min_fidelity() >= 1.0 - 1e-10);
                assert!(run.max_probability_deviation() <= 1e-10);
                assert!(run.transcript.classical_bits_consistent());
                assert!((run.transcript.total_probability() - 1.0).abs() < 1e-10);
                for b in run.transcript.branches() {
                    assert_eq!(run.transcript.classical_bits(b), 2 * n);
                }
            }
        }
    }

    #[test]
    fn teleport_zero_and_sample() {
        let run = teleport(&StateVector::zero(2).unwrap(), 2, MeasureMode::Sample(7)).unwrap();
        assert_eq!(run.branches.len(), 1);
        assert!(run.min_fidelity() >= 1.0 - 1e-10);
        let again = teleport(&StateVector::zero(2).unwrap(), 2, MeasureMode::Sample(7)).unwrap();
        assert_eq!(run.branches[0].outcome, again.branches[0].outcome);
        assert!(teleport(&StateVector::zero(2).unwrap(), 3, MeasureMode::Enumerate).is_err());
        assert!(teleport(&StateVector::zero(4).unwrap(), 4, MeasureMode::Enumerate).is_err());
    }

    #[test]
    fn worked_example() {
        let alphas: [C64; 8] = std::array::from_fn(|i| C64::new(0.1 * (i + 1) as f64, 0.05 * i as f64));
        let norm: f64 = alphas.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let input = worked_example_input(&alphas.map(|a| a / norm)).unwrap();
        let run = teleport(&input, 3, MeasureMode::Enumerate).unwrap();
        assert_eq!(run.branches.len(), 64);
        assert!(run.min_fidelity() >= 1.0 - 1e-10);

        let report = worked_example_analysis().unwrap();
        assert!(report.quoted_max_overlap < 1.0 - 1e-6);
        assert!(report.quoted_collapse_repeats_ket);
        let kets: std::collections::BTreeSet<_> = report.simulated_collapse.iter().map(|t| t.ket.clone()).collect();
        assert_eq!(kets.len(), 8);
    }

    #[test]
    fn superdense_round_trips() {
        assert_eq!(superdense_exhaustive(1).unwrap(), 0);
        assert_eq!(superdense_exhaustive(2).unwrap(), 0);
        let run = superdense_send("0000", 2).unwrap();
        assert_eq!(run.decoded, "0000");
        assert_eq!(run.transcript.qubits_sent(0), 2);
        assert!(superdense_send("010", 2).is_err());
        assert!(superdense_send("01x1", 2).is_err());
    }

    #[test]
    fn superdense_is_injective() {
        let basis = mirror_basis(2).unwrap();
        let decoded: std::collections::BTreeSet<String> = (0..16)
            .map(|w| superdense_with_basis(&bit_string(w, 4), &basis).unwrap().decoded)
            .collect();
        assert_eq!(decoded.len(), 16);
    }

    #[test]
    fn alice_basis_is_complete() {
        let b = qis_alice_basis(2, 3).unwrap();
        assert_eq!(b.states.len(), 32);
        for (i, x) in b.states.iter().enumerate() {
            for y in &b.states[i + 1..] {
                assert!(x.inner(y).unwrap().norm() < 1e-12);
            }
        }
        // 1/2(|00000> + |10100> + |11011> + |01111>) on (s1, s2, c1, c2, c3).
        let mut v = vec![0.0; 32];
        for k in [0b00000, 0b10100, 0b11011, 0b01111] {
            v[k] = 0.5;
        }
        let target = StateVector::from_real(5, &v).unwrap();
        assert!(b.states.iter().any(|s| fidelity(s, &target).unwrap() > 1.0 - 1e-12));
        assert!(qis_alice_basis(3, 2).is_err());
    }

    #[test]
    fn qis_mirror_channel_succeeds() {
        let channel = mirror_state(3).unwrap();
        let secret = random_state(11, 2);
        let run = qis_split(&secret, &channel, &main_layout()).unwrap();
        assert_eq!(run.branches.len(), 64);
        assert!(run.min_fidelity() >= 1.0 - 1e-10);
        assert!(run.transcript.classical_bits_consistent());
        assert!((run.transcript.total_probability() - 1.0).abs() < 1e-10);
        assert!(run.max_single_party_purity < 1.0 - 1e-6);
        assert!(run.bob_required);
        let quoted = quoted_qis_collapse(&secret).unwrap();
        assert!(run.bob_charlie_states.iter().any(|(_, s)| fidelity(s, &quoted).unwrap() > 1.0 - 1e-10));
    }

    #[test]
    fn bell_pairs_bypass_bob_in_pair_layout() {
        let pairs = PartyLayout::three_party(&[1, 2], &[3, 4], &[5, 6], 6).unwrap();
        let run = qis_split(&random_state(5, 2), &rearranged_bell(3).unwrap(), &pairs).unwrap();
        assert!(!run.bob_required);
        assert!(run.max_single_party_purity > 1.0 - 1e-9);
        assert!(matches!(
            qis_split(&random_state(5, 2), &mirror_state(3).unwrap(), &pairs),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn qis_trivial_secret() {
        let channel = mirror_state(3).unwrap();
        let run = qis_split(&StateVector::zero(2).unwrap(), &channel, &main_layout()).unwrap();
        assert!(run.min_fidelity() >= 1.0 - 1e-10);
    }

    #[test]
    fn feasibility_values() {
        let layout = main_layout();
        assert!(qis_feasibility(&mirror_state(3).unwrap(), &layout, 2).unwrap() > 0.5);
        let pairs = PartyLayout::three_party(&[1, 2], &[3, 4], &[5, 6], 6).unwrap();
        assert!(qis_feasibility(&rearranged_bell(3).unwrap(), &pairs, 2).unwrap() < 1e-9);
        assert!(qis_feasibility(&mirror_state(3).unwrap(), &pairs, 2).unwrap() > 0.5);
        let product = StateVector::zero(6).unwrap();
        assert!(qis_feasibility(&product, &layout, 2).unwrap() < 1e-9);
    }

    #[test]
    fn single_party_shares_are_mixed() {
        for (_, p) in single_party_purities(&mirror_state(3).unwrap(), &main_layout()).unwrap() {
            assert!(p < 1.0 - 1e-6);
        }
    }

    #[test]
    fn layout_validation() {
        assert!(PartyLayout::three_party(&[1, 2], &[2], &[3, 4, 5, 6], 6).is_err());
        assert!(PartyLayout::three_party(&[1, 2], &[3], &[5, 6], 6).is_err());
        let l = PartyLayout::parse("1,2,3/4/5,6", 6).unwrap();
        assert_eq!(l, main_layout());
        assert_eq!(l.to_string(), "1,2,3/4/5,6");
    }

    #[test]
    fn transcript_json_lines() {
        let run = superdense_send("10", 1).unwrap();
        let text = run.transcript.to_json_lines().unwrap();
        assert_eq!(text.lines().count(), 3);
        for line in text.lines() {
            let _: Event = serde_json::from_str(line).unwrap();
        }
    }
}
