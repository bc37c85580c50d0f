//! Dispatch of problem-file tasks to the library, with JSON and text renderings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use freediv::arrangements::Arrangement;
use freediv::classes::{
    chern_log_tangent, csm_complement_gradient, csm_complement_linear_free, csm_double_restriction, euler_char,
    jacobian_segre, lct_obstruction_from, log_jacobian_ideal, seh_numerical_test, ChowClass,
};
use freediv::curvetest::{curve_test, cusp_scan, dual_log_forms, quasi_homogeneous_basis, MonomialCurve, PoleOrder};
use freediv::degrees::{multidegrees_of_forms, segre_class_of_ideal, MultiDegrees, RationalMap, TrialPolicy};
use freediv::groebner::Ideal;
use freediv::logder::{free_basis, is_linear_free, logder_graded_basis, saito_check, Derivation, Freeness};
use freediv::poly::{MonomialOrder, QPoly};
use freediv::{Error, Result};

use crate::problem::{Problem, Task};

pub struct Context<'a> {
    pub problem: &'a Problem,
    pub policy: TrialPolicy,
    pub order: MonomialOrder,
}

pub struct TaskReport {
    pub task: &'static str,
    pub value: Value,
    pub text: Vec<String>,
    pub assumptions: Vec<String>,
}

const MONTE_CARLO: &str = "multidegrees are Monte Carlo values accepted by agreement across random primes";

pub fn rat(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Integers that fit in 64 bits become JSON numbers; everything else is an exact string.
pub fn num(c: &BigRational) -> Value {
    match c.to_integer().to_i64() {
        Some(v) if c.is_integer() => json!(v),
        _ => json!(rat(c)),
    }
}

fn big(b: &BigInt) -> Value {
    b.to_i64().map_or_else(|| json!(b.to_string()), |v| json!(v))
}

fn class_json(c: &ChowClass) -> Value {
    json!({
        "codim": c.coeffs().iter().map(num).collect::<Vec<_>>(),
        "text": c.to_string(),
    })
}

fn md_json(md: &MultiDegrees) -> Value {
    let prov: Vec<Value> = md
        .provenance
        .iter()
        .map(|p| {
            let trial = |t: &freediv::degrees::Trial| {
                json!({"seed": t.seed, "prime": t.prime, "value": t.value, "resamples": t.resamples})
            };
            json!({
                "k": p.k,
                "escalated": p.escalated,
                "trials": p.trials.iter().map(trial).collect::<Vec<_>>(),
                "exact": p.exact.as_ref().map(trial),
            })
        })
        .collect();
    json!({"values": md.values, "provenance": prov})
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Which sections each task reads; checked before anything runs.
pub fn check_requirements(p: &Problem) -> std::result::Result<(), String> {
    for t in &p.tasks {
        let name = t.name();
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("task {name} needs {what}")) };
        let has_div = p.divisor.is_some() || p.arrangement.is_some();
        match t {
            Task::Freeness | Task::LogderBasis(_) | Task::CsmGradient | Task::SehTest | Task::LctTest => {
                need(has_div, "a [divisor] or [arrangement] section")?
            }
            Task::Multideg => need(p.map.is_some() || has_div, "a [map] or [divisor] section")?,
            Task::Segre => need(p.ideal.is_some() || has_div, "an [ideal] or [divisor] section")?,
            Task::Groebner => need(p.ideal.is_some(), "an [ideal] section")?,
            Task::CsmLinearFree | Task::DoubleRestriction => {
                need(has_div, "a [divisor] or [arrangement] section")?;
                need(p.hypersurface.is_some(), "a [hypersurface] section")?
            }
            Task::Arrangement(_) => need(p.arrangement.is_some(), "an [arrangement] section")?,
            Task::Bk | Task::AkBk(_) => {
                need(p.arrangement.is_some(), "an [arrangement] section")?;
                need(p.hypersurface.is_some(), "a [hypersurface] section")?
            }
            Task::CurveTest(..) | Task::CuspScan(..) => need(p.divisor.is_some(), "a [divisor] section")?,
        }
    }
    Ok(())
}

impl Context<'_> {
    fn vars(&self) -> &[String] {
        &self.problem.vars
    }

    fn fmt(&self, f: &QPoly) -> String {
        f.fmt_with(self.vars())
    }

    fn fmt_der(&self, d: &Derivation) -> String {
        d.fmt_with(self.vars())
    }

    fn divisor(&self) -> QPoly {
        self.problem.divisor_equation().expect("checked by check_requirements")
    }

    fn hypersurface(&self) -> QPoly {
        self.problem.hypersurface.clone().expect("checked by check_requirements")
    }

    fn arrangement(&self) -> &Arrangement {
        self.problem.arrangement.as_ref().expect("checked by check_requirements")
    }

    /// A certified free basis with its exponents: from `[basis]`, the arrangement, or a graded search.
    fn free_basis(&self, h: &QPoly) -> Result<(Vec<Derivation>, Vec<u32>)> {
        if let Some(b) = &self.problem.basis {
            let cert = saito_check(h, b)?;
            if !cert.free {
                return Err(Error::NotFree("the given basis fails Saito's criterion".into()));
            }
            return Ok((b.clone(), cert.exponents));
        }
        if let Some(a) = &self.problem.arrangement {
            return Ok((a.log_basis()?.to_vec(), a.exponents()?));
        }
        match free_basis(h, None)? {
            Freeness::Free { basis, certificate } => Ok((basis, certificate.exponents)),
            Freeness::NotFree { reason } => Err(Error::NotFree(reason)),
        }
    }

    fn report(&self, task: &Task, value: Value, text: Vec<String>, assumptions: Vec<String>) -> TaskReport {
        TaskReport { task: task.name(), value, text, assumptions }
    }

    pub fn run(&self, task: &Task) -> Result<TaskReport> {
        let mc = |v: &mut Vec<String>| {
            if !self.policy.exact {
                v.push(MONTE_CARLO.to_string());
            }
        };
        match *task {
            Task::Freeness => {
                let h = self.divisor();
                let (found, reason) = if let Some(b) = &self.problem.basis {
                    let cert = saito_check(&h, b)?;
                    if cert.free {
                        (Some((b.clone(), cert)), None)
                    } else {
                        (None, Some("the given basis fails Saito's criterion".to_string()))
                    }
                } else if let Some(a) = &self.problem.arrangement {
                    match a.freeness()? {
                        Freeness::Free { basis, certificate } => (Some((basis.clone(), certificate.clone())), None),
                        Freeness::NotFree { reason } => (None, Some(reason.clone())),
                    }
                } else {
                    match free_basis(&h, None)? {
                        Freeness::Free { basis, certificate } => (Some((basis, certificate)), None),
                        Freeness::NotFree { reason } => (None, Some(reason)),
                    }
                };
                Ok(match found {
                    Some((basis, cert)) => {
                        let linear = !cert.exponents.is_empty() && cert.exponents.iter().all(|&e| e == 1);
                        let ders: Vec<String> = basis.iter().map(|d| self.fmt_der(d)).collect();
                        let unit = cert.unit.as_ref().map(rat).unwrap_or_default();
                        let unit_json = cert.unit.as_ref().map(num);
                        let mut text = vec![
                            format!("free: yes (det = {unit} * h)"),
                            format!("exponents: ({})", join(&cert.exponents)),
                            format!("linear free: {}", if linear { "yes" } else { "no" }),
                        ];
                        text.extend(ders.iter().map(|d| format!("  {d}")));
                        let value = json!({
                            "free": true,
                            "exponents": cert.exponents,
                            "linear_free": linear,
                            "unit": unit_json,
                            "basis": ders,
                        });
                        self.report(task, value, text, vec![])
                    }
                    None => {
                        let reason = reason.unwrap_or_default();
                        let text = vec![format!("free: no ({reason})")];
                        self.report(task, json!({"free": false, "reason": reason}), text, vec![])
                    }
                })
            }
            Task::LogderBasis(d) => {
                let b = logder_graded_basis(&self.divisor(), d)?;
                let ders: Vec<String> = b.iter().map(|x| self.fmt_der(x)).collect();
                let mut text = vec![format!("degree {d} logarithmic derivations: dimension {}", ders.len())];
                text.extend(ders.iter().map(|x| format!("  {x}")));
                Ok(self.report(task, json!({"degree": d, "dimension": ders.len(), "basis": ders}), text, vec![]))
            }
            Task::Multideg => {
                let (source, map) = match &self.problem.map {
                    Some(forms) => ("map", RationalMap::new(forms.clone())?),
                    None => ("gradient", RationalMap::gradient(&self.divisor())?),
                };
                let md = multidegrees_of_forms(map.forms(), &self.policy)?;
                let text = vec![format!("multidegrees ({source}): ({})", join(&md.values))];
                let mut value = md_json(&md);
                value["source"] = json!(source);
                let mut a = vec![];
                mc(&mut a);
                Ok(self.report(task, value, text, a))
            }
            Task::Segre => {
                let mut a = vec![];
                mc(&mut a);
                if let Some(gens) = &self.problem.ideal {
                    let s = segre_class_of_ideal(gens, self.vars().len(), true, &self.policy)?;
                    if s.equalized {
                        a.push("generators brought to a common degree by monomial multiples".into());
                    }
                    let text = vec![format!("s(I, P^{}) = {}", self.problem.n(), s.class)];
                    let value = json!({
                        "source": "ideal",
                        "class": class_json(&s.class),
                        "degree": s.degree,
                        "equalized": s.equalized,
                        "multidegrees": s.multidegrees.as_ref().map(md_json),
                    });
                    return Ok(self.report(task, value, text, a));
                }
                let js = jacobian_segre(&self.divisor(), &self.policy)?;
                let text = vec![
                    format!("s(J, P^{}) = {}", self.problem.n(), js.segre.class),
                    format!("gradient multidegrees: ({})", join(&js.gradient_multidegrees)),
                    format!(
                        "round trip through the gradient relation: {}",
                        if js.round_trip { "exact" } else { "FAILED" }
                    ),
                ];
                let value = json!({
                    "source": "jacobian",
                    "class": class_json(&js.segre.class),
                    "gradient_multidegrees": js.gradient_multidegrees,
                    "round_trip": js.round_trip,
                });
                Ok(self.report(task, value, text, a))
            }
            Task::Groebner => {
                let ideal = Ideal::new(self.vars().len(), self.problem.ideal.clone().unwrap_or_default());
                let gb = ideal.groebner_basis(self.order);
                let polys: Vec<String> = gb.iter().map(|g| self.fmt(g)).collect();
                let mut text =
                    vec![format!("reduced Groebner basis ({}): {} elements", self.order.name(), polys.len())];
                text.extend(polys.iter().map(|g| format!("  {g}")));
                let mut value = json!({"order": self.order.name(), "basis": polys});
                if let Ok(hd) = ideal.hilbert() {
                    text.push(format!("projective dimension {}, degree {}", hd.dim, hd.degree));
                    value["dimension"] = json!(hd.dim);
                    value["degree"] = json!(hd.degree);
                }
                Ok(self.report(task, value, text, vec![]))
            }
            Task::CsmGradient => {
                let r = csm_complement_gradient(&self.divisor(), &self.policy)?;
                let chi = euler_char(&r.class)?;
                let text = vec![
                    format!("gradient multidegrees: ({})", join(&r.multidegrees.values)),
                    format!("c_SM(P^n \\ D) = {}", r.class),
                    format!("Euler characteristic of the complement: {chi}"),
                ];
                let value = json!({
                    "class": class_json(&r.class),
                    "euler": big(&chi),
                    "multidegrees": md_json(&r.multidegrees),
                });
                let mut a = vec![];
                mc(&mut a);
                Ok(self.report(task, value, text, a))
            }
            Task::CsmLinearFree => {
                let h = self.divisor();
                let basis = match &self.problem.basis {
                    Some(b) => b.clone(),
                    None => is_linear_free(&h)?.ok_or(Error::NotLinearFree)?,
                };
                let g = self.hypersurface();
                let r = csm_complement_linear_free(&h, &g, &basis, &self.policy)?;
                let chi = euler_char(&r.class)?;
                let text = vec![
                    format!("m_k(V, log D): ({})", join(&r.multidegrees.values)),
                    format!("c_SM(P^n \\ (V u D)) = {}", r.class),
                    format!("Euler characteristic of the complement: {chi}"),
                ];
                let value = json!({
                    "class": class_json(&r.class),
                    "euler": big(&chi),
                    "multidegrees": md_json(&r.multidegrees),
                });
                let mut a = vec!["1_V is log transverse to D".to_string()];
                mc(&mut a);
                Ok(self.report(task, value, text, a))
            }
            Task::DoubleRestriction => {
                let h = self.divisor();
                let g = self.hypersurface();
                let (basis, exponents) = self.free_basis(&h)?;
                let deg_v = freediv_reduced_degree(&g)?;
                let ideal = log_jacobian_ideal(&h, &g, &basis)?;
                let s = segre_class_of_ideal(ideal.gens(), self.vars().len(), true, &self.policy)?;
                let n = self.problem.n();
                let c_log = chern_log_tangent(n, &exponents)?;
                let (v_minus_d, union) = csm_double_restriction(n, &exponents, deg_v, &s.class)?;
                let (chi_v, chi_u) = (euler_char(&v_minus_d)?, euler_char(&union)?);
                let text = vec![
                    format!("exponents: ({})", join(&exponents)),
                    format!("s(J_V(log D), P^{n}) = {}", s.class),
                    format!("c(TP^n(-log D)) = {c_log}"),
                    format!("c_SM(V \\ D) = {v_minus_d}   (chi = {chi_v})"),
                    format!("c_SM(P^n \\ (V u D)) = {union}   (chi = {chi_u})"),
                ];
                let value = json!({
                    "exponents": exponents,
                    "segre": class_json(&s.class),
                    "equalized": s.equalized,
                    "log_tangent": class_json(&c_log),
                    "v_minus_d": class_json(&v_minus_d),
                    "complement": class_json(&union),
                    "euler_v_minus_d": big(&chi_v),
                    "euler_complement": big(&chi_u),
                });
                let mut a = vec!["1_V is log transverse to D".to_string()];
                if s.equalized {
                    a.push("log Jacobian generators brought to a common degree by monomial multiples".into());
                }
                mc(&mut a);
                Ok(self.report(task, value, text, a))
            }
            Task::SehTest | Task::LctTest => {
                let v = seh_numerical_test(&self.divisor(), &self.policy)?;
                let ob = lct_obstruction_from(&v);
                let mut text = vec![
                    format!("gradient multidegrees: ({})", join(&v.multidegrees)),
                    format!("binomial coefficients: ({})", join(&v.binomials)),
                ];
                let mut a = vec![];
                let value = if matches!(task, Task::SehTest) {
                    text.push(format!("SEH numerical test: {}", if v.pass { "PASS" } else { "FAIL" }));
                    a.push("a pass is a necessary condition for strong Euler homogeneity, not a proof".into());
                    json!({
                        "pass": v.pass,
                        "multidegrees": v.multidegrees,
                        "binomials": v.binomials,
                        "first_mismatch": v.first_mismatch,
                    })
                } else {
                    match &ob {
                        Some(o) => text.push(format!(
                            "LCT fails: g_{} = {} differs from binomial {}",
                            o.index, o.multidegree, o.binomial
                        )),
                        None => text.push("no obstruction found (this does not prove LCT)".into()),
                    }
                    a.push("the certificate applies to linear free divisors".into());
                    json!({
                        "obstruction": ob.as_ref().map(|o| json!({
                            "index": o.index,
                            "multidegree": o.multidegree,
                            "binomial": o.binomial,
                        })),
                        "multidegrees": v.multidegrees,
                    })
                };
                mc(&mut a);
                Ok(self.report(task, value, text, a))
            }
            Task::Arrangement(pivot) => {
                let a = self.arrangement();
                let lat = a.lattice()?;
                let chi = lat.char_poly();
                let poincare = lat.poincare();
                let affine = a.decone(pivot)?;
                let mut text = vec![
                    format!("{} hyperplanes, {} flats, rank {}", a.len(), lat.len(), lat.rank()),
                    format!("chi(t) = {chi}"),
                    format!("poincare(t) = {poincare}"),
                    format!("decone at hyperplane {pivot}: {affine}"),
                ];
                let mut value = json!({
                    "hyperplanes": a.len(),
                    "flats": lat.len(),
                    "rank": lat.rank(),
                    "char_poly": chi.coeffs(),
                    "poincare": poincare.coeffs(),
                    "pivot": pivot,
                    "affine_char_poly": affine.coeffs(),
                    "free": false,
                });
                match a.freeness()? {
                    Freeness::Free { certificate, .. } => {
                        let e = &certificate.exponents;
                        let terao = a.terao_factorization_holds()?;
                        let aluffi = a.aluffi_identity_check(e)?;
                        if !terao {
                            return Err(Error::Precondition(
                                "characteristic polynomial does not factor over the exponents of a certified free arrangement".into(),
                            ));
                        }
                        text.push(format!("free with exponents ({})", join(e)));
                        text.push(format!("factorization over exponents: {}", if terao { "holds" } else { "fails" }));
                        text.push(format!(
                            "t * sum c_(n-k) t^k = chi(t+1): {}",
                            if aluffi { "holds" } else { "fails" }
                        ));
                        value["free"] = json!(true);
                        value["exponents"] = json!(e);
                        value["factorization"] = json!(terao);
                        value["aluffi_identity"] = json!(aluffi);
                    }
                    Freeness::NotFree { reason } => text.push(format!("not free: {reason}")),
                }
                Ok(self.report(task, value, text, vec![]))
            }
            Task::Bk => {
                let d = self.arrangement().b_k(&self.hypersurface(), &self.policy)?;
                let text = vec![
                    format!("exponents: ({})", join(&d.exponents)),
                    format!("s(J_V(log A), P^{}) = {}", self.problem.n(), d.segre.class),
                    format!("b_k(V, log A): ({})", join(&d.b)),
                ];
                let value = json!({
                    "b": d.b,
                    "degree": d.degree,
                    "exponents": d.exponents,
                    "segre": class_json(&d.segre.class),
                    "equalized": d.segre.equalized,
                });
                let mut a = vec![];
                if d.segre.equalized {
                    a.push("log Jacobian generators brought to a common degree by monomial multiples".into());
                }
                mc(&mut a);
                Ok(self.report(task, value, text, a))
            }
            Task::AkBk(pivot) => {
                let r = self.arrangement().euler_via_akbk(&self.hypersurface(), pivot, &self.policy)?;
                let text = vec![
                    format!("a_k: ({})", join(&r.a)),
                    format!("b_k: ({})", join(&r.b)),
                    format!("sum a_k b_k = {}", r.euler),
                    format!(
                        "double restriction: {} ({})",
                        r.double_restriction,
                        if r.agree { "agrees" } else { "DISAGREES" }
                    ),
                ];
                let value = json!({
                    "a": r.a,
                    "b": r.b,
                    "euler": r.euler,
                    "double_restriction": big(&r.double_restriction),
                    "agree": r.agree,
                    "pivot": pivot,
                });
                let mut a = r.assumptions.clone();
                mc(&mut a);
                Ok(self.report(task, value, text, a))
            }
            Task::CurveTest(ea, eb) => {
                let h = self.problem.divisor.clone().expect("checked by check_requirements");
                let curve = MonomialCurve::new(if h.nvars() == 2 { vec![ea, eb] } else { vec![] }).map_err(|_| {
                    Error::Precondition("curve-test takes two exponents for a bivariate divisor".into())
                })?;
                let basis = match &self.problem.basis {
                    Some(b) => b.clone(),
                    None => quasi_homogeneous_basis(&h)?,
                };
                let forms = dual_log_forms(&h, &basis)?;
                let t = curve_test(&h, &basis, &curve)?;
                let orders: Vec<String> = t.orders.iter().map(PoleOrder::to_string).collect();
                let mut text = vec![format!("curve {}: curve-test {}", t.curve, if t.pass { "PASS" } else { "FAIL" })];
                if t.inside_divisor {
                    text.push("curve lies inside the divisor; the test holds vacuously".into());
                } else {
                    text.push(format!("pole orders: ({})", orders.join(", ")));
                }
                let value = json!({
                    "curve": t.curve.exps(),
                    "pass": t.pass,
                    "inside_divisor": t.inside_divisor,
                    "pole_orders": t.orders.iter().map(|o| match o {
                        PoleOrder::Order(k) => json!(k),
                        PoleOrder::ZeroForm => json!("zero"),
                    }).collect::<Vec<_>>(),
                    "gcd": t.gcd,
                    "normalized_agrees": t.normalized_agrees,
                    "forms": forms.fmt_with(self.vars()),
                });
                let a = vec!["verdict concerns the curve-test hypothesis only, not log transversality itself".into()];
                Ok(self.report(task, value, text, a))
            }
            Task::CuspScan(amax, bmax) => {
                let h = self.problem.divisor.clone().expect("checked by check_requirements");
                let scan = cusp_scan(&h, self.problem.basis.as_deref(), amax, bmax, self.policy.exec)?;
                let fails: Vec<[u32; 2]> =
                    scan.cells.iter().filter(|c| !c.pass).map(|c| [c.curve.exps()[0], c.curve.exps()[1]]).collect();
                let inside: Vec<[u32; 2]> = scan
                    .cells
                    .iter()
                    .filter(|c| c.inside_divisor)
                    .map(|c| [c.curve.exps()[0], c.curve.exps()[1]])
                    .collect();
                let mut text: Vec<String> = scan.grid().lines().map(str::to_string).collect();
                text.push("+ pass, - fail, o curve inside the divisor".into());
                let grid: Vec<String> = (1..=amax)
                    .map(|a| {
                        (1..=bmax)
                            .map(|b| {
                                let c = scan.cell(a, b);
                                if c.inside_divisor {
                                    'o'
                                } else if c.pass {
                                    '+'
                                } else {
                                    '-'
                                }
                            })
                            .collect()
                    })
                    .collect();
                let value =
                    json!({"a_max": amax, "b_max": bmax, "grid": grid, "fail": fails, "inside_divisor": inside});
                let a = vec!["verdict concerns the curve-test hypothesis only, not log transversality itself".into()];
                Ok(self.report(task, value, text, a))
            }
        }
    }
}

fn freediv_reduced_degree(g: &QPoly) -> Result<u32> {
    let d = g.homogeneous_degree().filter(|&d| d > 0 && !g.is_zero());
    let d = d.ok_or_else(|| Error::Precondition("V must be a positive-degree reduced form".into()))?;
    if !freediv::groebner::is_squarefree(g) {
        return Err(Error::NotReduced);
    }
    Ok(d)
}
