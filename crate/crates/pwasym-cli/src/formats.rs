//! Text formats. Every file starts with a format tag line; `#` starts a
//! comment; numbers are exact integers, decimals or `p/q` rationals.
//!
//! System files (`pwa-system`) declare dimensions, the analysis region,
//! the input polytope and one block per mode (rows of `A`, rows of `B`,
//! the offset `f` and the guard). Specification files (`pwa-spec`) list
//! spec states by 1-based mode index and edges between them. Reports,
//! controllers and traces are written by the tool and re-read where a
//! pipeline stage needs them.

use std::collections::BTreeMap;

use pwasym::abstraction::{MetricsReport, SymbolicState, SymbolicSystem};
use pwasym::geometry::{Halfspace, Polytope, PolytopeSet};
use pwasym::linalg::Matrix;
use pwasym::pwa::{Mode, PWASystem};
use pwasym::scalar::{parse_scalar, Scalar};
use pwasym::synthesis::{
    ClosedLoopRun, ControlStrategy, EnforcementVerdict, SpecAutomaton, Truncation,
};

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub const SYSTEM_TAG: &str = "pwa-system";
pub const SPEC_TAG: &str = "pwa-spec";
pub const REPORT_TAG: &str = "pwa-report";
pub const CONTROLLER_TAG: &str = "pwa-controller";
pub const TRACE_TAG: &str = "pwa-trace";

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse(format!("line {line}: {}", msg.into()))
}

fn number(line: usize, token: &str) -> Result<Scalar> {
    parse_scalar(token).map_err(|e| parse_err(line, e))
}

fn index(line: usize, token: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected an index, found `{token}`")))
}

struct Cursor {
    lines: Vec<(usize, Vec<String>)>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Cursor {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let uncommented = raw.split('#').next().unwrap_or("");
                let tokens: Vec<String> =
                    uncommented.split_whitespace().map(str::to_string).collect();
                (!tokens.is_empty()).then_some((i + 1, tokens))
            })
            .collect();
        Cursor { lines, pos: 0 }
    }

    fn peek(&self) -> Option<&(usize, Vec<String>)> {
        self.lines.get(self.pos)
    }

    fn advance(&mut self) -> Result<(usize, Vec<String>)> {
        let item = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or_else(|| CliError::Parse("unexpected end of file".into()))?;
        self.pos += 1;
        Ok(item)
    }

    fn expect_tag(&mut self, tag: &str) -> Result<()> {
        let (line, tokens) = self.advance()?;
        if tokens.len() != 1 || tokens[0] != tag {
            return Err(parse_err(line, format!("expected format tag `{tag}`")));
        }
        Ok(())
    }

    fn expect_keyword_value(&mut self, keyword: &str) -> Result<(usize, String)> {
        let (line, tokens) = self.advance()?;
        if tokens.len() != 2 || tokens[0] != keyword {
            return Err(parse_err(line, format!("expected `{keyword} <value>`")));
        }
        Ok((line, tokens[1].clone()))
    }
}

/// Reads the format tag of a file without consuming anything else.
pub fn sniff_tag(text: &str) -> Result<String> {
    let cursor = Cursor::new(text);
    cursor
        .peek()
        .map(|(_, tokens)| tokens[0].clone())
        .ok_or_else(|| CliError::Parse("empty file".into()))
}

fn parse_halfspace_line(line: usize, tokens: &[String], dim: usize) -> Result<Halfspace> {
    if tokens.first().map(String::as_str) != Some("h") {
        return Err(parse_err(line, "expected a halfspace line starting with `h`"));
    }
    let le = tokens
        .iter()
        .position(|t| t == "<=")
        .ok_or_else(|| parse_err(line, "halfspace line needs `<=`"))?;
    if le != dim + 1 || tokens.len() != dim + 3 {
        return Err(parse_err(
            line,
            format!("halfspace line needs {dim} coefficients, `<=`, and an offset"),
        ));
    }
    let normal = tokens[1..le]
        .iter()
        .map(|t| number(line, t))
        .collect::<Result<Vec<Scalar>>>()?;
    let offset = number(line, &tokens[le + 1])?;
    Ok(Halfspace::new(normal, offset))
}

/// Parses a `name ... end` block of halfspace lines.
fn parse_halfspace_block(cursor: &mut Cursor, name: &str, dim: usize) -> Result<Vec<Halfspace>> {
    let (line, tokens) = cursor.advance()?;
    if tokens.len() != 1 || tokens[0] != name {
        return Err(parse_err(line, format!("expected `{name}` block")));
    }
    parse_halfspaces_until_end(cursor, dim)
}

fn parse_halfspaces_until_end(cursor: &mut Cursor, dim: usize) -> Result<Vec<Halfspace>> {
    let mut out = Vec::new();
    loop {
        let (line, tokens) = cursor.advance()?;
        if tokens.len() == 1 && tokens[0] == "end" {
            return Ok(out);
        }
        out.push(parse_halfspace_line(line, &tokens, dim)?);
    }
}

fn bounded_polytope(dim: usize, hs: Vec<Halfspace>, what: &str) -> Result<Polytope> {
    Polytope::from_halfspaces(dim, hs)
        .map_err(|e| CliError::Model(format!("{what}: {e}")))
}

pub fn parse_system(text: &str) -> Result<PWASystem> {
    let mut cursor = Cursor::new(text);
    cursor.expect_tag(SYSTEM_TAG)?;
    let (line, value) = cursor.expect_keyword_value("state-dim")?;
    let n = index(line, &value)?;
    let (line, value) = cursor.expect_keyword_value("input-dim")?;
    let m = index(line, &value)?;
    if n == 0 || m == 0 {
        return Err(parse_err(line, "dimensions must be positive"));
    }
    let region = bounded_polytope(n, parse_halfspace_block(&mut cursor, "region", n)?, "region")?;
    let input = bounded_polytope(m, parse_halfspace_block(&mut cursor, "input", m)?, "input")?;
    let mut modes = Vec::new();
    while let Some((line, tokens)) = cursor.peek().cloned() {
        if tokens.len() != 1 || tokens[0] != "mode" {
            return Err(parse_err(line, "expected a `mode` block"));
        }
        cursor.advance()?;
        modes.push(parse_mode(&mut cursor, n, m, modes.len() + 1)?);
    }
    if modes.is_empty() {
        return Err(CliError::Parse("system declares no modes".into()));
    }
    PWASystem::new(modes, input, region).map_err(CliError::from)
}

fn parse_mode(cursor: &mut Cursor, n: usize, m: usize, mode_no: usize) -> Result<Mode> {
    let mut a_rows: Vec<Vec<Scalar>> = Vec::new();
    let mut b_rows: Vec<Vec<Scalar>> = Vec::new();
    let mut f: Option<Vec<Scalar>> = None;
    let mut guard: Option<Polytope> = None;
    loop {
        let (line, tokens) = cursor.advance()?;
        match tokens[0].as_str() {
            "end" => break,
            "a" => {
                if tokens.len() != n + 1 {
                    return Err(parse_err(line, format!("`a` row needs {n} entries")));
                }
                a_rows.push(
                    tokens[1..]
                        .iter()
                        .map(|t| number(line, t))
                        .collect::<Result<Vec<Scalar>>>()?,
                );
            }
            "b" => {
                if tokens.len() != m + 1 {
                    return Err(parse_err(line, format!("`b` row needs {m} entries")));
                }
                b_rows.push(
                    tokens[1..]
                        .iter()
                        .map(|t| number(line, t))
                        .collect::<Result<Vec<Scalar>>>()?,
                );
            }
            "f" => {
                if tokens.len() != n + 1 {
                    return Err(parse_err(line, format!("`f` needs {n} entries")));
                }
                f = Some(
                    tokens[1..]
                        .iter()
                        .map(|t| number(line, t))
                        .collect::<Result<Vec<Scalar>>>()?,
                );
            }
            "guard" => {
                let hs = parse_halfspaces_until_end(cursor, n)?;
                guard = Some(bounded_polytope(
                    n,
                    hs,
                    &format!("guard of mode {mode_no}"),
                )?);
            }
            other => {
                return Err(parse_err(
                    line,
                    format!("unexpected token `{other}` in mode block"),
                ))
            }
        }
    }
    if a_rows.len() != n || b_rows.len() != n {
        return Err(CliError::Parse(format!(
            "mode {mode_no}: expected {n} rows for `a` and `b`"
        )));
    }
    Ok(Mode {
        a: Matrix::new(a_rows),
        b: Matrix::new(b_rows),
        f: f.ok_or_else(|| CliError::Parse(format!("mode {mode_no}: missing `f`")))?,
        guard: guard
            .ok_or_else(|| CliError::Parse(format!("mode {mode_no}: missing `guard` block")))?,
    })
}

fn write_halfspaces(out: &mut String, indent: &str, halfspaces: &[Halfspace]) {
    for hs in halfspaces {
        out.push_str(indent);
        out.push('h');
        for c in &hs.normal {
            out.push_str(&format!(" {c}"));
        }
        out.push_str(&format!(" <= {}\n", hs.offset));
    }
}

/// Canonical text form of a system; parsing it back yields an identical
/// system (all polytopes are stored canonically).
pub fn serialize_system(sys: &PWASystem) -> String {
    let mut out = String::new();
    out.push_str(SYSTEM_TAG);
    out.push('\n');
    out.push_str(&format!("state-dim {}\n", sys.state_dim()));
    out.push_str(&format!("input-dim {}\n", sys.input_dim()));
    out.push_str("region\n");
    write_halfspaces(&mut out, "  ", sys.region().halfspaces());
    out.push_str("end\n");
    out.push_str("input\n");
    write_halfspaces(&mut out, "  ", sys.input().halfspaces());
    out.push_str("end\n");
    for mode in sys.modes() {
        out.push_str("mode\n");
        for i in 0..mode.a.nrows() {
            out.push_str("  a");
            for c in mode.a.row(i) {
                out.push_str(&format!(" {c}"));
            }
            out.push('\n');
        }
        for i in 0..mode.b.nrows() {
            out.push_str("  b");
            for c in mode.b.row(i) {
                out.push_str(&format!(" {c}"));
            }
            out.push('\n');
        }
        out.push_str("  f");
        for c in &mode.f {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
        out.push_str("  guard\n");
        write_halfspaces(&mut out, "    ", mode.guard.halfspaces());
        out.push_str("  end\n");
        out.push_str("end\n");
    }
    out
}

/// Spec files declare states by 1-based mode index and edges between
/// declared states.
pub fn parse_spec(text: &str, mode_count: usize) -> Result<SpecAutomaton> {
    let mut cursor = Cursor::new(text);
    cursor.expect_tag(SPEC_TAG)?;
    let mut modes: Vec<usize> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    while let Some((line, tokens)) = cursor.peek().cloned() {
        cursor.advance()?;
        match tokens[0].as_str() {
            "state" if tokens.len() == 2 => {
                let mode = index(line, &tokens[1])?;
                if mode == 0 {
                    return Err(parse_err(line, "mode indices are 1-based"));
                }
                modes.push(mode - 1);
            }
            "edge" if tokens.len() == 3 => {
                let from = index(line, &tokens[1])?;
                let to = index(line, &tokens[2])?;
                if from == 0 || to == 0 {
                    return Err(parse_err(line, "mode indices are 1-based"));
                }
                let lookup = |mode: usize| -> Result<usize> {
                    modes.iter().position(|&m| m == mode).ok_or_else(|| {
                        CliError::Model(format!(
                            "edge references mode {} which is not a spec state",
                            mode + 1
                        ))
                    })
                };
                edges.push((lookup(from - 1)?, lookup(to - 1)?));
            }
            other => {
                return Err(parse_err(
                    line,
                    format!("expected `state <mode>` or `edge <from> <to>`, found `{other}`"),
                ))
            }
        }
    }
    SpecAutomaton::new(modes, edges, mode_count).map_err(CliError::from)
}

pub struct ReportData<'a> {
    pub lambda: &'a Scalar,
    pub max_level: u32,
    pub epsilon: Option<&'a Scalar>,
    pub levels: &'a [MetricsReport],
    pub synthesis: Option<SynthesisRecord<'a>>,
}

pub struct SynthesisRecord<'a> {
    pub level: u32,
    pub controlled_states: usize,
    pub controller_bound: &'a Scalar,
    pub enforcement: Option<(&'a EnforcementVerdict, u32, u64)>,
}

pub fn serialize_report(data: &ReportData) -> String {
    let mut out = String::new();
    out.push_str(REPORT_TAG);
    out.push('\n');
    out.push_str(&format!("lambda {}\n", data.lambda));
    out.push_str(&format!("max-level {}\n", data.max_level));
    match data.epsilon {
        Some(eps) => out.push_str(&format!("epsilon {eps}\n")),
        None => out.push_str("epsilon none\n"),
    }
    out.push_str(&format!("levels {}\n", data.levels.len()));
    for report in data.levels {
        out.push_str(&format!("level {}\n", report.level));
        out.push_str(&format!("  states {}\n", report.state_count));
        out.push_str(&format!("  transitions {}\n", report.transition_count));
        out.push_str(&format!("  spurious {}\n", report.spurious_state_count));
        out.push_str(&format!("  gran {}\n", report.gran));
        out.push_str(&format!("  sim-bound {}\n", report.sim_bound));
        out.push_str(&format!("  fixed-point {}\n", report.fixed_point));
    }
    if let Some(syn) = &data.synthesis {
        out.push_str("synthesis\n");
        out.push_str(&format!("  level {}\n", syn.level));
        out.push_str(&format!("  controlled-states {}\n", syn.controlled_states));
        out.push_str(&format!("  controller-bound {}\n", syn.controller_bound));
        if syn.controlled_states == 0 {
            out.push_str("  warning no-controlled-states\n");
        }
        if let Some((verdict, horizon, seed)) = &syn.enforcement {
            out.push_str("enforcement\n");
            out.push_str(&format!("  trials {}\n", verdict.trials));
            out.push_str(&format!("  horizon {horizon}\n"));
            out.push_str(&format!("  seed {seed}\n"));
            out.push_str(&format!("  violations {}\n", verdict.violations));
            out.push_str(&format!("  truncated {}\n", verdict.truncated));
            if verdict.vacuous {
                out.push_str("  warning vacuous\n");
            }
        }
    }
    out
}

/// The subset of a report that later stages need: the contraction rate.
pub fn parse_report_lambda(text: &str) -> Result<Scalar> {
    let mut cursor = Cursor::new(text);
    cursor.expect_tag(REPORT_TAG)?;
    let (line, value) = cursor.expect_keyword_value("lambda")?;
    number(line, &value)
}

/// Controller files carry everything the simulation stage needs: the
/// grid parameters, the specification, every cell and the per-state
/// input regions (absent blocks mean empty assignments).
pub struct ControllerFile {
    pub lambda: Scalar,
    pub level: u32,
    pub state_dim: usize,
    pub input_dim: usize,
    pub spec_modes: Vec<usize>,
    pub spec_edges: Vec<(usize, usize)>,
    pub states: Vec<(usize, usize, Polytope, Vec<Polytope>)>,
}

pub fn serialize_controller(
    sys: &PWASystem,
    a: &SymbolicSystem,
    strategy: &ControlStrategy,
    spec: &SpecAutomaton,
    lambda: &Scalar,
) -> String {
    let mut out = String::new();
    out.push_str(CONTROLLER_TAG);
    out.push('\n');
    out.push_str(&format!("lambda {lambda}\n"));
    out.push_str(&format!("level {}\n", a.level()));
    out.push_str(&format!("state-dim {}\n", sys.state_dim()));
    out.push_str(&format!("input-dim {}\n", sys.input_dim()));
    for &mode in spec.mode_indices() {
        out.push_str(&format!("spec-state {}\n", mode + 1));
    }
    for &(from, to) in spec.edges() {
        out.push_str(&format!(
            "spec-edge {} {}\n",
            spec.mode_indices()[from] + 1,
            spec.mode_indices()[to] + 1
        ));
    }
    for state in a.states() {
        out.push_str(&format!("state {} mode {}\n", state.id, state.mode + 1));
        out.push_str("cell\n");
        write_halfspaces(&mut out, "  ", state.cell.halfspaces());
        out.push_str("end\n");
        if let Some(assignment) = strategy.assignment(state.id) {
            for part in assignment.parts() {
                out.push_str("part\n");
                write_halfspaces(&mut out, "  ", part.halfspaces());
                out.push_str("end\n");
            }
        }
    }
    out
}

pub fn parse_controller(text: &str) -> Result<ControllerFile> {
    let mut cursor = Cursor::new(text);
    cursor.expect_tag(CONTROLLER_TAG)?;
    let (line, value) = cursor.expect_keyword_value("lambda")?;
    let lambda = number(line, &value)?;
    let (line, value) = cursor.expect_keyword_value("level")?;
    let level = index(line, &value)? as u32;
    let (line, value) = cursor.expect_keyword_value("state-dim")?;
    let state_dim = index(line, &value)?;
    let (line, value) = cursor.expect_keyword_value("input-dim")?;
    let input_dim = index(line, &value)?;
    let mut spec_modes = Vec::new();
    let mut spec_edges = Vec::new();
    let mut states: Vec<(usize, usize, Polytope, Vec<Polytope>)> = Vec::new();
    while let Some((line, tokens)) = cursor.peek().cloned() {
        cursor.advance()?;
        match tokens[0].as_str() {
            "spec-state" if tokens.len() == 2 => {
                spec_modes.push(index(line, &tokens[1])? - 1);
            }
            "spec-edge" if tokens.len() == 3 => {
                spec_edges.push((index(line, &tokens[1])? - 1, index(line, &tokens[2])? - 1));
            }
            "state" if tokens.len() == 4 && tokens[2] == "mode" => {
                let id = index(line, &tokens[1])?;
                let mode = index(line, &tokens[3])?;
                if mode == 0 {
                    return Err(parse_err(line, "mode indices are 1-based"));
                }
                let (cell_line, cell_tokens) = cursor.advance()?;
                if cell_tokens.len() != 1 || cell_tokens[0] != "cell" {
                    return Err(parse_err(cell_line, "expected `cell` block after state"));
                }
                let hs = parse_halfspaces_until_end(&mut cursor, state_dim)?;
                let cell = bounded_polytope(state_dim, hs, &format!("cell of state {id}"))?;
                states.push((id, mode - 1, cell, Vec::new()));
            }
            "part" if tokens.len() == 1 => {
                let hs = parse_halfspaces_until_end(&mut cursor, input_dim)?;
                let part = bounded_polytope(input_dim, hs, "input region part")?;
                states
                    .last_mut()
                    .ok_or_else(|| parse_err(line, "`part` before any state"))?
                    .3
                    .push(part);
            }
            other => {
                return Err(parse_err(line, format!("unexpected token `{other}`")));
            }
        }
    }
    Ok(ControllerFile {
        lambda,
        level,
        state_dim,
        input_dim,
        spec_modes,
        spec_edges,
        states,
    })
}

impl ControllerFile {
    /// Rebuilds the in-memory pieces for the simulation stage.
    pub fn instantiate(
        &self,
        sys: &PWASystem,
    ) -> Result<(SymbolicSystem, ControlStrategy, SpecAutomaton)> {
        if self.state_dim != sys.state_dim() || self.input_dim != sys.input_dim() {
            return Err(CliError::Model(
                "controller dimensions do not match the system".into(),
            ));
        }
        let edges = self
            .spec_edges
            .iter()
            .map(|&(from, to)| {
                let lookup = |mode: usize| {
                    self.spec_modes.iter().position(|&m| m == mode).ok_or_else(|| {
                        CliError::Model(format!(
                            "controller spec edge references mode {}",
                            mode + 1
                        ))
                    })
                };
                Ok((lookup(from)?, lookup(to)?))
            })
            .collect::<Result<Vec<(usize, usize)>>>()?;
        let spec = SpecAutomaton::new(self.spec_modes.clone(), edges, sys.modes().len())
            .map_err(CliError::from)?;
        let mut states = Vec::new();
        let mut assignments = BTreeMap::new();
        for (pos, (id, mode, cell, parts)) in self.states.iter().enumerate() {
            if *id != pos {
                return Err(CliError::Model(
                    "controller states must be listed in id order".into(),
                ));
            }
            if *mode >= sys.modes().len() {
                return Err(CliError::Model(format!(
                    "controller state {id} names mode {}",
                    mode + 1
                )));
            }
            states.push(SymbolicState {
                id: *id,
                cell: cell.clone(),
                mode: *mode,
                spurious: false,
            });
            if !parts.is_empty() {
                assignments.insert(
                    *id,
                    PolytopeSet::new(self.input_dim, parts.clone()),
                );
            }
        }
        let a = SymbolicSystem::from_parts(self.level, states, Vec::new());
        let strategy = ControlStrategy::from_assignments(self.level, assignments);
        Ok((a, strategy, spec))
    }
}

pub fn serialize_trace(
    run: &ClosedLoopRun,
    spec: &SpecAutomaton,
    x0: &[Scalar],
    horizon: u32,
    seed: u64,
) -> String {
    let mut out = String::new();
    out.push_str(TRACE_TAG);
    out.push('\n');
    out.push_str("x0");
    for c in x0 {
        out.push_str(&format!(" {c}"));
    }
    out.push('\n');
    out.push_str(&format!("horizon {horizon}\n"));
    out.push_str(&format!("seed {seed}\n"));
    for (t, state) in run.trajectory.states.iter().enumerate() {
        out.push_str(&format!("step {t}\n"));
        if t > 0 {
            out.push_str("  input");
            for c in &run.trajectory.inputs[t - 1] {
                out.push_str(&format!(" {c}"));
            }
            out.push('\n');
        }
        out.push_str("  state");
        for c in state {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
        if let Some(witness) = run.witness.get(t) {
            if witness.is_empty() {
                out.push_str("  witness none\n");
            } else {
                out.push_str("  witness");
                for &q in witness {
                    out.push_str(&format!(" {}", spec.mode_indices()[q] + 1));
                }
                out.push('\n');
            }
        }
    }
    let truncation = match run.truncation {
        Truncation::None => "none",
        Truncation::ExitedRegion => "exited-region",
        Truncation::NoAssignment => "no-assignment",
        Truncation::WitnessEmpty => "witness-empty",
    };
    out.push_str(&format!("truncation {truncation}\n"));
    out
}

pub fn parse_point(text: &str, dim: usize) -> Result<Vec<Scalar>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != dim {
        return Err(CliError::Parse(format!(
            "point needs {dim} comma-separated coordinates"
        )));
    }
    parts
        .iter()
        .map(|t| parse_scalar(t).map_err(CliError::Parse))
        .collect()
}
