//! Running parsed programs against a session and collecting reports.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use pvkit_core::algebra::{ConstantsField, Matrix, Q};
use pvkit_core::basechange::{extend_constants, galois_commutation_check, split_and_analyze};
use pvkit_core::galois::{descend, galois_group};
use pvkit_core::module::{fixed_vectors_with, render_matrix, scalar_rational_solutions_with, DifferenceModule, SolverOptions};
use pvkit_core::pv::{construct_pv, pv_isomorphism, universal_pv, verify_pv, PvPresentation};
use pvkit_core::ring::{constants_of, simplicity_certificate, total_fractions_check, DifferenceRing, RingElement, RingKind};
use pvkit_core::PvError;

use crate::dsl::{parse_program, Command, Expr, FieldSpec, Pos, RingSpec, Statement, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub degree_cap: usize,
    pub trace: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, degree_cap: SolverOptions::default().degree_cap, trace: false }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("line {line}: {msg}")]
    Usage { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Domain { line: usize, source: PvError },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain { .. } => 2,
            _ => 1,
        }
    }
}

/// One command's outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub line: usize,
    pub text: Vec<String>,
    pub result: Value,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug)]
struct Object {
    module: DifferenceModule,
    /// Inhomogeneous term of an equation `tau(y) = a y + b`.
    inhom: Option<RingElement>,
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    ring: Option<DifferenceRing>,
    objects: BTreeMap<String, Object>,
    pvs: BTreeMap<String, PvPresentation>,
    opts: Options,
}

type CmdResult<T> = Result<T, CliError>;

fn usage<T>(pos: Pos, msg: impl Into<String>) -> CmdResult<T> {
    Err(CliError::Usage { line: pos.line, msg: msg.into() })
}

fn lift(pos: Pos) -> impl Fn(PvError) -> CliError {
    move |e| {
        if e.is_domain_error() {
            CliError::Domain { line: pos.line, source: e }
        } else {
            CliError::Usage { line: pos.line, msg: e.to_string() }
        }
    }
}

/// The constants field named by a spec.
pub fn field_of(spec: &FieldSpec, pos: Pos) -> CmdResult<ConstantsField> {
    match spec {
        FieldSpec::Rationals => Ok(ConstantsField::rationals()),
        FieldSpec::Named(n) if n == "i" => Ok(ConstantsField::gaussian()),
        FieldSpec::Named(n) => match n.strip_prefix("zeta").and_then(|d| d.parse::<u64>().ok()) {
            Some(d) if d >= 1 => Ok(ConstantsField::cyclotomic(d)),
            _ => usage(pos, format!("unknown field Q({n}); use Q(i), Q(zetaN) or Q(name: polynomial)")),
        },
        FieldSpec::Defined(name, poly) => {
            let q = ConstantsField::rationals();
            let work = DifferenceRing::shift_field(&q);
            let f = eval_in(&work, poly, Some(name), pos)?;
            let coeffs = f
                .as_ratfunc()
                .filter(|r| r.den().is_one())
                .and_then(|r| r.num().as_rational_coeffs())
                .ok_or_else(|| CliError::Usage { line: pos.line, msg: format!("defining polynomial of {name} must be a rational polynomial") })?;
            ConstantsField::number_field(&coeffs, name).map_err(lift(pos))
        }
    }
}

/// Affine value `coef * y + constant`.
struct Affine {
    coef: Option<RingElement>,
    constant: RingElement,
}

/// Arithmetic happens in `K(x)` for the function kinds and in the ring
/// itself for products.
fn work_ring(ring: &DifferenceRing) -> DifferenceRing {
    match ring.kind() {
        RingKind::Product { .. } => ring.clone(),
        _ => DifferenceRing::shift_field(ring.field()),
    }
}

fn eval_affine(w: &DifferenceRing, e: &Expr, var: Option<&str>, pos: Pos) -> CmdResult<Affine> {
    let err = lift(pos);
    let k = w.field();
    let konst = |c: RingElement| Ok(Affine { coef: None, constant: c });
    let add_opt = |a: Option<RingElement>, b: Option<RingElement>, neg: bool| -> CmdResult<Option<RingElement>> {
        Ok(match (a, b) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(if neg { w.neg(&b).map_err(lift(pos))? } else { b }),
            (Some(a), Some(b)) => Some(if neg { w.sub(&a, &b) } else { w.add(&a, &b) }.map_err(lift(pos))?),
        })
    };
    match e {
        Expr::Int(n) => konst(w.constant(&k.from_rational(Q::from_integer(n.clone())))),
        Expr::Var(name, vpos) => {
            let is_x = match var {
                Some(v) => name == v,
                None => name == "x",
            };
            if is_x {
                return match w.x() {
                    Ok(x) => konst(x),
                    Err(_) => usage(*vpos, "x is not available in a product ring"),
                };
            }
            if !k.is_rationals() && name == k.generator_name() {
                return konst(w.constant(&k.generator()));
            }
            usage(*vpos, format!("unknown identifier '{name}' at column {}", vpos.col))
        }
        Expr::Y => Ok(Affine { coef: Some(w.one()), constant: w.zero() }),
        Expr::Neg(a) => {
            let a = eval_affine(w, a, var, pos)?;
            Ok(Affine {
                coef: a.coef.map(|c| w.neg(&c)).transpose().map_err(&err)?,
                constant: w.neg(&a.constant).map_err(&err)?,
            })
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let neg = matches!(e, Expr::Sub(..));
            let (a, b) = (eval_affine(w, a, var, pos)?, eval_affine(w, b, var, pos)?);
            let constant = if neg { w.sub(&a.constant, &b.constant) } else { w.add(&a.constant, &b.constant) }.map_err(&err)?;
            Ok(Affine { coef: add_opt(a.coef, b.coef, neg)?, constant })
        }
        Expr::Mul(a, b) => {
            let (a, b) = (eval_affine(w, a, var, pos)?, eval_affine(w, b, var, pos)?);
            let coef = match (&a.coef, &b.coef) {
                (Some(_), Some(_)) => return usage(pos, "the equation is not linear in y(x)"),
                (Some(c), None) => Some(w.mul(c, &b.constant).map_err(&err)?),
                (None, Some(c)) => Some(w.mul(&a.constant, c).map_err(&err)?),
                (None, None) => None,
            };
            Ok(Affine { coef, constant: w.mul(&a.constant, &b.constant).map_err(&err)? })
        }
        Expr::Div(a, b) => {
            let (a, b) = (eval_affine(w, a, var, pos)?, eval_affine(w, b, var, pos)?);
            if b.coef.is_some() {
                return usage(pos, "cannot divide by y(x)");
            }
            if b.constant.is_zero() {
                return Err(CliError::Domain { line: pos.line, source: PvError::DivisionByZero });
            }
            let inv = w.inv(&b.constant).map_err(&err)?;
            Ok(Affine {
                coef: a.coef.map(|c| w.mul(&c, &inv)).transpose().map_err(&err)?,
                constant: w.mul(&a.constant, &inv).map_err(&err)?,
            })
        }
        Expr::Pow(a, n) => {
            let a = eval_affine(w, a, var, pos)?;
            if a.coef.is_some() {
                return usage(pos, "powers of y(x) are not linear");
            }
            if a.constant.is_zero() && *n < 0 {
                return Err(CliError::Domain { line: pos.line, source: PvError::DivisionByZero });
            }
            konst(w.pow(&a.constant, *n).map_err(&err)?)
        }
        Expr::Tuple(items) => {
            let Some(len) = w.product_len() else {
                return usage(pos, "tuples are only meaningful in product rings");
            };
            if items.len() != len {
                return usage(pos, format!("tuple of length {} in a product of {len} factors", items.len()));
            }
            let mut coords = Vec::with_capacity(len);
            for it in items {
                let v = eval_affine(w, it, var, pos)?;
                if v.coef.is_some() {
                    return usage(pos, "y(x) inside a tuple");
                }
                let c = v.constant.as_constant().ok_or_else(|| CliError::Usage {
                    line: pos.line,
                    msg: "tuple entries must be constants".into(),
                })?;
                coords.push(c);
            }
            konst(w.tuple(coords).map_err(&err)?)
        }
    }
}

/// Evaluate a `y`-free expression in the work ring.
fn eval_in(w: &DifferenceRing, e: &Expr, var: Option<&str>, pos: Pos) -> CmdResult<RingElement> {
    let v = eval_affine(w, e, var, pos)?;
    if v.coef.is_some() {
        return usage(pos, "y(x) may only appear on the right hand side of an equation");
    }
    Ok(v.constant)
}

/// Move a work-ring value into the session ring.
fn into_ring(ring: &DifferenceRing, v: RingElement, pos: Pos) -> CmdResult<RingElement> {
    match v {
        RingElement::Fn(f) => ring.element(f).map_err(lift(pos)),
        t => Ok(t),
    }
}

fn eval_element(ring: &DifferenceRing, e: &Expr, pos: Pos) -> CmdResult<RingElement> {
    let w = work_ring(ring);
    let v = eval_in(&w, e, None, pos)?;
    into_ring(ring, v, pos)
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn render_vec(v: &[i64]) -> String {
    format!("({})", strs(v).join(", "))
}

impl Session {
    pub fn new(opts: Options) -> Self {
        Session { opts, ..Default::default() }
    }

    fn ring(&self, pos: Pos) -> CmdResult<&DifferenceRing> {
        self.ring.as_ref().ok_or(CliError::Usage { line: pos.line, msg: "no ring declared; start with 'ring ...'".into() })
    }

    fn object(&self, name: &str, pos: Pos) -> CmdResult<&Object> {
        self.objects
            .get(name)
            .ok_or_else(|| CliError::Usage { line: pos.line, msg: format!("unknown identifier '{name}'") })
    }

    fn homogeneous(&self, name: &str, pos: Pos) -> CmdResult<&DifferenceModule> {
        let obj = self.object(name, pos)?;
        if obj.inhom.is_some() {
            return Err(CliError::Domain {
                line: pos.line,
                source: PvError::OutsideDiagonalizableScope(format!("{name} is inhomogeneous")),
            });
        }
        Ok(&obj.module)
    }

    fn presentation(&mut self, name: &str, pos: Pos) -> CmdResult<PvPresentation> {
        if let Some(s) = self.pvs.get(name) {
            return Ok(s.clone());
        }
        let m = self.homogeneous(name, pos)?.clone();
        let s = construct_pv(&m).map_err(lift(pos))?;
        self.pvs.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions { degree_cap: self.opts.degree_cap, ..SolverOptions::default() }
    }

    fn declare(&mut self, name: &str, obj: Object) {
        self.pvs.remove(name);
        self.objects.insert(name.to_string(), obj);
    }

    /// Run one statement.
    pub fn run(&mut self, st: &Statement) -> CmdResult<Report> {
        let pos = st.pos;
        let err = lift(pos);
        let mut text = Vec::new();
        let mut trace = Vec::new();
        let result = match &st.command {
            Command::Ring(spec) => {
                let ring = match spec {
                    RingSpec::Shift(f) => DifferenceRing::shift_field(&field_of(f, pos)?),
                    RingSpec::Poly(f) => DifferenceRing::shift_poly(&field_of(f, pos)?),
                    RingSpec::Cyclic(f, n) => DifferenceRing::cyclic_product(&field_of(f, pos)?, *n).map_err(&err)?,
                    RingSpec::QDil(f, q) => {
                        let k = field_of(f, pos)?;
                        let w = DifferenceRing::shift_field(&k);
                        let qv = eval_in(&w, q, None, pos)?
                            .as_constant()
                            .ok_or_else(|| CliError::Usage { line: pos.line, msg: "q must be a constant".into() })?;
                        DifferenceRing::q_dilation(&k, qv).map_err(&err)?
                    }
                };
                text.push(format!("Ring: {}", ring.describe()));
                let v = json!({"ring": ring.describe(), "kind": ring.kind_name(), "field": ring.field().label()});
                self.ring = Some(ring);
                self.objects.clear();
                self.pvs.clear();
                v
            }
            Command::Module { name, rows } => {
                let ring = self.ring(pos)?.clone();
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return usage(pos, format!("module matrix must be square, got {n} rows of lengths {:?}", rows.iter().map(|r| r.len()).collect::<Vec<_>>()));
                }
                let mut entries = Vec::with_capacity(n);
                for row in rows {
                    let mut out = Vec::with_capacity(n);
                    for e in row {
                        out.push(eval_element(&ring, e, pos)?);
                    }
                    entries.push(out);
                }
                let m = DifferenceModule::from_recurrence(&ring, Matrix::from_rows(entries)).map_err(&err)?;
                let b = render_matrix(&m.recurrence_matrix());
                text.push(format!("Module {name}: rank {}, y(tau x) = B y(x) with B = {b}", m.rank()));
                trace.push(format!("basis form A = B^-1 = {}", m.render()));
                let v = json!({"name": name, "rank": m.rank(), "recurrence_matrix": b, "basis_matrix": m.render()});
                self.declare(name, Object { module: m, inhom: None });
                v
            }
            Command::Eq { name, arg, rhs } => {
                let ring = self.ring(pos)?.clone();
                let w = work_ring(&ring);
                match ring.kind() {
                    RingKind::Product { .. } => {
                        let ok = matches!(arg, Expr::Add(a, b)
                            if matches!(a.as_ref(), Expr::Var(v, _) if v == "x")
                            && matches!(b.as_ref(), Expr::Int(n) if *n == BigInt::from(1)));
                        if !ok {
                            return usage(pos, "in a product ring write the shifted unknown as y(x+1)");
                        }
                    }
                    _ => {
                        let got = eval_in(&w, arg, None, pos)?;
                        let want = ring.tau_apply(&w.x().map_err(&err)?, 1).map_err(&err)?;
                        if got != want {
                            return usage(pos, format!("the left hand side must be y({want}) for {}", ring.describe()));
                        }
                    }
                }
                let v = eval_affine(&w, rhs, None, pos)?;
                let a = v.coef.ok_or_else(|| CliError::Usage { line: pos.line, msg: "the right hand side does not involve y(x)".into() })?;
                let a = into_ring(&ring, a, pos)?;
                let b = into_ring(&ring, v.constant, pos)?;
                let m = DifferenceModule::from_recurrence(&ring, Matrix::from_rows(vec![vec![a.clone()]])).map_err(&err)?;
                let inhom = (!b.is_zero()).then(|| b.clone());
                match &inhom {
                    None => text.push(format!("Equation {name}: tau(y) = ({a})*y")),
                    Some(b) => text.push(format!("Equation {name}: tau(y) = ({a})*y + ({b})")),
                }
                trace.push(format!("basis form A = {}", m.render()));
                let v = json!({"name": name, "a": a.to_string(), "b": b.to_string()});
                self.declare(name, Object { module: m, inhom });
                v
            }
            Command::Constants => {
                let c = constants_of(self.ring(pos)?);
                text.push(format!("Constants: {}", c.label()));
                trace.extend(c.trace.iter().cloned());
                json!({"constants": c.label(), "is_field": c.is_field(), "copies": c.copies})
            }
            Command::Fractions => {
                let (s, rep) = total_fractions_check(self.ring(pos)?).map_err(&err)?;
                text.push(format!(
                    "Total ring of fractions {}: C_R = {} is a field: {}; C_S = {}: {}",
                    s.describe(),
                    rep.constants_r,
                    rep.c_r_is_field,
                    rep.constants_s,
                    rep.c_s_equals_c_r
                ));
                trace.extend(rep.trace.iter().cloned());
                json!({
                    "fractions": s.describe(),
                    "constants_r": rep.constants_r,
                    "constants_s": rep.constants_s,
                    "c_r_is_field": rep.c_r_is_field,
                    "c_s_equals_c_r": rep.c_s_equals_c_r,
                })
            }
            Command::Simple => {
                let c = simplicity_certificate(self.ring(pos)?);
                match &c.witness {
                    Some(w) => text.push(format!("Simplicity: {} (witness {w})", c.verdict.as_str())),
                    None => text.push(format!("Simplicity: {}", c.verdict.as_str())),
                }
                trace.extend(c.trace.iter().cloned());
                json!({"verdict": c.verdict.as_str(), "witness": c.witness})
            }
            Command::Solve(name) => {
                let ring = self.ring(pos)?.clone();
                let obj = self.object(name, pos)?.clone();
                let opts = self.solver_options();
                if obj.module.rank() == 1 {
                    // tau(y) = a y + b with a the recurrence scalar
                    let a = obj.module.recurrence_matrix().get(0, 0).clone();
                    let b = obj.inhom.clone().unwrap_or_else(|| ring.zero());
                    if ring.product_len().is_none() && ring.is_field() {
                        let sol = scalar_rational_solutions_with(&ring, &a, &b, &opts).map_err(&err)?;
                        let part = sol.particular.as_ref().map(|p| p.to_string());
                        let hom = strs(&sol.homogeneous);
                        text.push(format!(
                            "Rational solutions of {name}: particular {}; homogeneous basis {{{}}}",
                            part.clone().unwrap_or_else(|| "none".into()),
                            hom.join(", ")
                        ));
                        trace.extend(sol.warnings.iter().cloned());
                        return Ok(self.finish(st, text, trace, json!({
                            "particular": part,
                            "homogeneous": hom,
                            "certified": sol.certified,
                        })));
                    }
                    if obj.inhom.is_some() {
                        return Err(CliError::Domain {
                            line: pos.line,
                            source: PvError::UnsupportedBase(format!("inhomogeneous equations over {}", ring.describe())),
                        });
                    }
                }
                if obj.inhom.is_some() {
                    return usage(pos, "inhomogeneous systems are not supported");
                }
                let fv = fixed_vectors_with(&obj.module, &opts).map_err(&err)?;
                let vecs: Vec<Vec<String>> = fv.vectors.iter().map(|v| strs(v)).collect();
                let shown: Vec<String> = vecs.iter().map(|v| format!("[{}]", v.join(", "))).collect();
                text.push(format!("Rational solutions of {name}: dimension {} {{{}}}", fv.dim(), shown.join(", ")));
                trace.push(format!("method {}", fv.method));
                trace.extend(fv.warnings.iter().cloned());
                json!({"dimension": fv.dim(), "vectors": vecs, "certified": fv.certified, "method": fv.method})
            }
            Command::Group(name) => {
                let m = self.homogeneous(name, pos)?.clone();
                let g = galois_group(&m).map_err(&err)?;
                text.push(format!("Galois group: {g}"));
                trace.push(format!("character lattice basis {:?} in Z^{}", g.lattice().basis(), m.rank()));
                g.to_json()
            }
            Command::Pv(name) => {
                self.pvs.remove(name);
                let s = self.presentation(name, pos)?;
                text.push(format!("Picard-Vessiot ring for {name}: {}", describe_pv(&s)));
                s.to_json()
            }
            Command::Universal(names) => {
                let mut mods = Vec::with_capacity(names.len());
                for n in names {
                    mods.push(self.homogeneous(n, pos)?.clone());
                }
                let s = universal_pv(&mods).map_err(&err)?;
                text.push(format!("Universal Picard-Vessiot ring for {}: {}", names.join(", "), describe_pv(&s)));
                s.to_json()
            }
            Command::Verify(name) => {
                let s = self.presentation(name, pos)?;
                let m = self.homogeneous(name, pos)?.clone();
                let rep = verify_pv(&s, &m).map_err(&err)?;
                let mut conds = Vec::new();
                for c in &rep.conditions {
                    let mut line = format!("({}) {}: {}", c.label, c.name, if c.passed { "pass" } else { "fail" });
                    if let Some(w) = &c.witness {
                        line.push_str(&format!(" [witness {w}]"));
                    }
                    text.push(line);
                    trace.extend(c.trace.iter().map(|t| format!("({}) {t}", c.label)));
                    conds.push(json!({
                        "label": c.label.to_string(),
                        "name": c.name,
                        "passed": c.passed,
                        "witness": c.witness,
                    }));
                }
                json!({"conditions": conds, "all_passed": rep.all_passed()})
            }
            Command::Descend { name, chi } => {
                let s = self.presentation(name, pos)?;
                if chi.len() != s.generator_count() {
                    return usage(pos, format!("chi has {} entries but {name} has {} generators", chi.len(), s.generator_count()));
                }
                let d = descend(chi, &s).map_err(&err)?;
                let scalar = d.module.recurrence_matrix().get(0, 0).clone();
                text.push(format!("Descent of chi = {}: y(tau x) = ({scalar})*y(x)", render_vec(chi)));
                trace.extend(d.trace.iter().cloned());
                let alt = d.alternative.as_ref().map(|(k, w)| json!({"representative": k, "isomorphism": w.to_string()}));
                json!({
                    "character": chi,
                    "representative": d.representative,
                    "scalar": scalar.to_string(),
                    "recurrence_matrix": render_matrix(&d.module.recurrence_matrix()),
                    "alternative": alt,
                })
            }
            Command::Iso(a, b) => {
                let s1 = self.presentation(a, pos)?;
                let s2 = self.presentation(b, pos)?;
                let iso = pv_isomorphism(&s1, &s2).map_err(&err)?;
                let images = iso.render();
                text.push(format!("Isomorphism {a} -> {b}: {}", images.join("; ")));
                json!({"images": images, "verified": iso.check().map_err(&err)?})
            }
            Command::Basechange(spec) => {
                let ring = self.ring(pos)?.clone();
                let target = field_of(spec, pos)?;
                let ext = extend_constants(&ring, &target).map_err(&err)?;
                let mut objects = BTreeMap::new();
                let mut extra = Vec::new();
                for (n, o) in &self.objects {
                    let module = ext.map_module(&o.module).map_err(&err)?;
                    extra.extend(module.matrix().entries().cloned());
                    let inhom = o.inhom.as_ref().map(|b| ext.map_element(b)).transpose().map_err(&err)?;
                    objects.insert(n.clone(), Object { module, inhom });
                }
                let comm = galois_commutation_check(&ext, self.opts.seed, &extra).map_err(&err)?;
                text.push(format!(
                    "Base change to {}: {}; constants {}; Galois action commutes with tau: {}",
                    target.label(),
                    ext.ring.describe(),
                    ext.constants.label(),
                    comm.holds
                ));
                trace.extend(comm.trace.iter().cloned());
                let mut v = ext.to_json();
                v["commutes"] = json!(comm.holds);
                v["automorphisms"] = json!(comm.automorphisms);
                v["elements_checked"] = json!(comm.elements_checked);
                self.ring = Some(ext.ring.clone());
                self.objects = objects;
                self.pvs.clear();
                v
            }
            Command::Split(name) => {
                let m = self.homogeneous(name, pos)?.clone();
                let sp = split_and_analyze(&m).map_err(&err)?;
                let eig = strs(&sp.eigenvalues);
                text.push(format!(
                    "Split {name} over {}: eigenvalues {{{}}}; Galois group: {}",
                    sp.field().label(),
                    eig.join(", "),
                    sp.group
                ));
                trace.push(format!("conjugation P = {}", render_matrix(&sp.conjugation)));
                json!({
                    "field": sp.field().label(),
                    "minimal_polynomial": sp.field().minimal_polynomial_string(),
                    "eigenvalues": eig,
                    "conjugation": render_matrix(&sp.conjugation),
                    "recurrence_matrix": render_matrix(&sp.module.recurrence_matrix()),
                    "group": sp.group.to_json(),
                })
            }
            Command::Print(name) => {
                let obj = self.object(name, pos)?;
                let line = format!("module {name} = {}", render_matrix(&obj.module.recurrence_matrix()));
                text.push(line.clone());
                json!({"source": line})
            }
        };
        Ok(self.finish(st, text, trace, result))
    }

    fn finish(&self, st: &Statement, text: Vec<String>, trace: Vec<String>, result: Value) -> Report {
        Report { command: st.source.clone(), line: st.pos.line, text, result, trace }
    }

    pub fn ring_ref(&self) -> Option<&DifferenceRing> {
        self.ring.as_ref()
    }

    pub fn module(&self, name: &str) -> Option<&DifferenceModule> {
        self.objects.get(name).map(|o| &o.module)
    }
}

fn describe_pv(s: &PvPresentation) -> String {
    let names = s.generator_names();
    let taus: Vec<String> = (0..s.generator_count())
        .map(|i| format!("tau({}) = {}", names[i], s.render(&s.tau(&s.generator(i)).expect("tau of a generator"))))
        .collect();
    let rels: Vec<String> = s.relations().iter().map(|(l, r)| format!("{} = {r}", s.render_monomial(l))).collect();
    format!(
        "generators {{{}}}; {}; relations {{{}}}",
        names.join(", "),
        taus.join(", "),
        rels.join(", ")
    )
}

/// Parse and run a program; reports of the commands that ran, and the
/// first error if any.
pub fn run_program(text: &str, opts: &Options) -> (Vec<Report>, Option<CliError>) {
    let statements = match parse_program(text) {
        Ok(s) => s,
        Err(e) => return (Vec::new(), Some(e.into())),
    };
    let mut session = Session::new(opts.clone());
    let mut reports = Vec::new();
    for st in &statements {
        match session.run(st) {
            Ok(r) => reports.push(r),
            Err(e) => return (reports, Some(e)),
        }
    }
    (reports, None)
}

/// Plain text: one block per command, traces under `--trace`.
pub fn emit_text(reports: &[Report], trace: bool) -> String {
    let mut out = String::new();
    for r in reports {
        for l in &r.text {
            out.push_str(l);
            out.push('\n');
        }
        if trace {
            for t in &r.trace {
                out.push_str("  | ");
                out.push_str(t);
                out.push('\n');
            }
        }
    }
    out
}

/// Canonical JSON (sorted keys); traces only under `--trace`.
pub fn emit_json(reports: &[Report], trace: bool) -> String {
    let items: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut v = json!({"command": r.command, "line": r.line, "result": r.result});
            if trace {
                v["trace"] = json!(r.trace);
            }
            v
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json!({ "reports": items })).expect("serializable");
    s.push('\n');
    s
}
