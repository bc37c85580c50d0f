//! Line-oriented problem files: `key = value` headers, then named sections.
//!
//! ```text
//! vars = x, y, z, w
//! seed = 7
//!
//! [divisor]
//! y^2*z^2 - 4*x*z^3 - 4*y^3*w + 18*x*y*z*w - 27*x^2*w^2
//!
//! [hypersurface]
//! 3*x - 5*y + 7*z + w
//!
//! [tasks]
//! freeness
//! seh-test
//! csm-linear-free
//! ```

use std::fmt;
use std::str::FromStr;

use freediv::arrangements::Arrangement;
use freediv::logder::Derivation;
use freediv::poly::{parse_poly, MonomialOrder, QPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ProblemError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ProblemError> {
    Err(ProblemError { line, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Freeness,
    LogderBasis(u32),
    Multideg,
    Segre,
    Groebner,
    CsmGradient,
    CsmLinearFree,
    DoubleRestriction,
    SehTest,
    LctTest,
    Arrangement(usize),
    Bk,
    AkBk(usize),
    CurveTest(u32, u32),
    CuspScan(u32, u32),
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Freeness => "freeness",
            Task::LogderBasis(_) => "logder-basis",
            Task::Multideg => "multideg",
            Task::Segre => "segre",
            Task::Groebner => "groebner",
            Task::CsmGradient => "csm-gradient",
            Task::CsmLinearFree => "csm-linear-free",
            Task::DoubleRestriction => "double-restriction",
            Task::SehTest => "seh-test",
            Task::LctTest => "lct-test",
            Task::Arrangement(_) => "arrangement",
            Task::Bk => "bk",
            Task::AkBk(_) => "akbk",
            Task::CurveTest(..) => "curve-test",
            Task::CuspScan(..) => "cusp-scan",
        }
    }

    /// Tasks that read the divisor as a projective hypersurface.
    fn needs_form(&self) -> bool {
        !matches!(
            self,
            Task::Freeness | Task::CurveTest(..) | Task::CuspScan(..) | Task::Multideg | Task::Segre | Task::Groebner
        )
    }
}

fn parse_task(line: usize, src: &str) -> Result<Task, ProblemError> {
    let mut words = src.split_whitespace();
    let name = words.next().unwrap_or_default();
    let args: Vec<&str> = words.collect();
    let num = |i: usize| -> Result<u32, ProblemError> {
        match args.get(i) {
            Some(s) => s.parse().or_else(|_| err(line, format!("task {name}: expected an integer, got {s:?}"))),
            None => err(line, format!("task {name}: missing argument {}", i + 1)),
        }
    };
    let opt = |default: u32| -> Result<u32, ProblemError> {
        if args.is_empty() {
            Ok(default)
        } else {
            num(0)
        }
    };
    let arity = |n: usize| -> Result<(), ProblemError> {
        if args.len() > n {
            err(line, format!("task {name}: too many arguments"))
        } else {
            Ok(())
        }
    };
    let task = match name {
        "freeness" => Task::Freeness,
        "logder-basis" => Task::LogderBasis(num(0)?),
        "multideg" => Task::Multideg,
        "segre" => Task::Segre,
        "groebner" => Task::Groebner,
        "csm-gradient" => Task::CsmGradient,
        "csm-linear-free" => Task::CsmLinearFree,
        "double-restriction" => Task::DoubleRestriction,
        "seh-test" => Task::SehTest,
        "lct-test" => Task::LctTest,
        "arrangement" => Task::Arrangement(opt(0)? as usize),
        "bk" => Task::Bk,
        "akbk" => Task::AkBk(opt(0)? as usize),
        "curve-test" => Task::CurveTest(num(0)?, num(1)?),
        "cusp-scan" => Task::CuspScan(num(0)?, num(1)?),
        other => return err(line, format!("unknown task {other:?}")),
    };
    arity(match task {
        Task::LogderBasis(_) | Task::Arrangement(_) | Task::AkBk(_) => 1,
        Task::CurveTest(..) | Task::CuspScan(..) => 2,
        _ => 0,
    })?;
    Ok(task)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: Option<u64>,
    pub prime_bits: Option<u32>,
    pub trials: Option<usize>,
    pub exact: Option<bool>,
    pub order: Option<MonomialOrder>,
}

pub fn parse_order(s: &str) -> Option<MonomialOrder> {
    match s {
        "grevlex" => Some(MonomialOrder::Grevlex),
        "lex" => Some(MonomialOrder::Lex),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub vars: Vec<String>,
    pub options: Options,
    pub divisor: Option<QPoly>,
    pub arrangement: Option<Arrangement>,
    pub hypersurface: Option<QPoly>,
    pub basis: Option<Vec<Derivation>>,
    pub map: Option<Vec<QPoly>>,
    pub ideal: Option<Vec<QPoly>>,
    pub tasks: Vec<Task>,
}

impl Problem {
    /// The divisor equation, or the product of the arrangement's forms.
    pub fn divisor_equation(&self) -> Option<QPoly> {
        self.divisor.clone().or_else(|| self.arrangement.as_ref().map(|a| a.product()))
    }

    pub fn n(&self) -> usize {
        self.vars.len() - 1
    }

    /// Degree checks done before any task runs.
    pub fn validate(&self) -> Result<(), freediv::Error> {
        use freediv::Error;
        if self.tasks.iter().any(Task::needs_form) {
            if let Some(h) = &self.divisor {
                if !h.is_homogeneous() || h.is_zero() {
                    return Err(Error::NotHomogeneous("divisor equation must be a nonzero form".into()));
                }
            }
        }
        if let Some(g) = &self.hypersurface {
            if !g.is_homogeneous() || g.is_zero() {
                return Err(Error::NotHomogeneous("hypersurface equation must be a nonzero form".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Divisor,
    Arrangement,
    Hypersurface,
    Basis,
    Map,
    Ideal,
    Tasks,
}

impl FromStr for Section {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "divisor" => Section::Divisor,
            "arrangement" => Section::Arrangement,
            "hypersurface" => Section::Hypersurface,
            "basis" => Section::Basis,
            "map" => Section::Map,
            "ideal" => Section::Ideal,
            "tasks" => Section::Tasks,
            _ => return Err(()),
        })
    }
}

fn poly(line: usize, src: &str, vars: &[String]) -> Result<QPoly, ProblemError> {
    parse_poly(src, vars).or_else(|e| err(line, e.to_string()))
}

pub fn parse_problem(src: &str) -> Result<Problem, ProblemError> {
    let mut section = Section::Header;
    let mut vars: Option<Vec<String>> = None;
    let mut declared_n: Option<(usize, usize)> = None;
    let mut options = Options::default();
    let mut blocks: Vec<(Section, usize, String)> = Vec::new();
    let mut seen = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or_default().trim();
        if text.is_empty() {
            continue;
        }
        if let Some(name) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            section = name.trim().parse().or_else(|_| err(line, format!("unknown section [{name}]")))?;
            if seen.contains(&name.to_string()) {
                return err(line, format!("section [{name}] appears twice"));
            }
            seen.push(name.to_string());
            continue;
        }
        if section != Section::Header {
            blocks.push((section, line, text.to_string()));
            continue;
        }
        let Some((key, value)) = text.split_once('=') else {
            return err(line, "expected `key = value` before the first section");
        };
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| ProblemError { line, message: format!("invalid {what}: {value:?}") };
        match key {
            "vars" => {
                let v: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                if v.iter().any(|s| s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_')) {
                    return Err(bad("variable list"));
                }
                vars = Some(v);
            }
            "n" => declared_n = Some((line, value.parse().map_err(|_| bad("ambient dimension"))?)),
            "seed" => options.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "prime-bits" => options.prime_bits = Some(value.parse().map_err(|_| bad("prime size"))?),
            "trials" => options.trials = Some(value.parse().map_err(|_| bad("trial count"))?),
            "exact" => options.exact = Some(value.parse().map_err(|_| bad("flag"))?),
            "order" => options.order = Some(parse_order(value).ok_or_else(|| bad("monomial order"))?),
            other => return err(line, format!("unknown header key {other:?}")),
        }
    }
    let Some(vars) = vars else {
        return err(1, "missing `vars = ...` header");
    };
    if let Some((line, n)) = declared_n {
        if n + 1 != vars.len() {
            return err(line, format!("n = {n} but {} variables are declared", vars.len()));
        }
    }
    let mut p = Problem {
        vars,
        options,
        divisor: None,
        arrangement: None,
        hypersurface: None,
        basis: None,
        map: None,
        ideal: None,
        tasks: Vec::new(),
    };
    let mut arrangement_lines = Vec::new();
    for (section, line, text) in blocks {
        let vars = &p.vars;
        match section {
            Section::Divisor | Section::Hypersurface => {
                let slot = if section == Section::Divisor { &mut p.divisor } else { &mut p.hypersurface };
                if slot.is_some() {
                    return err(line, "expected a single polynomial in this section");
                }
                *slot = Some(poly(line, &text, vars)?);
            }
            Section::Arrangement => arrangement_lines.push((line, poly(line, &text, vars)?)),
            Section::Basis => {
                let coeffs = text.split(',').map(|c| poly(line, c.trim(), vars)).collect::<Result<Vec<_>, _>>()?;
                if coeffs.len() != vars.len() {
                    return err(line, format!("derivation needs {} components, got {}", vars.len(), coeffs.len()));
                }
                p.basis.get_or_insert_with(Vec::new).push(Derivation::new(coeffs));
            }
            Section::Map => p.map.get_or_insert_with(Vec::new).push(poly(line, &text, vars)?),
            Section::Ideal => p.ideal.get_or_insert_with(Vec::new).push(poly(line, &text, vars)?),
            Section::Tasks => p.tasks.push(parse_task(line, &text)?),
            Section::Header => unreachable!(),
        }
    }
    if !arrangement_lines.is_empty() {
        let line = arrangement_lines[0].0;
        let forms: Vec<QPoly> = arrangement_lines.into_iter().map(|(_, f)| f).collect();
        p.arrangement = Some(Arrangement::new(p.vars.len(), &forms).or_else(|e| err(line, e.to_string()))?);
        if p.divisor.is_some() {
            return err(line, "give either [divisor] or [arrangement], not both");
        }
    }
    if p.tasks.is_empty() {
        return err(src.lines().count().max(1), "no tasks");
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "\
# binary cubic discriminant
vars = x, y, z, w
n = 3
seed = 11

[divisor]
y^2*z^2 - 4*x*z^3 - 4*y^3*w + 18*x*y*z*w - 27*x^2*w^2

[hypersurface]
3*x - 5*y + 7*z + w

[tasks]
freeness
cusp-scan 5 7
akbk
";

    #[test]
    fn parses_a_problem() {
        let p = parse_problem(SRC).unwrap();
        assert_eq!(p.vars, vec!["x", "y", "z", "w"]);
        assert_eq!(p.options.seed, Some(11));
        assert_eq!(p.tasks, vec![Task::Freeness, Task::CuspScan(5, 7), Task::AkBk(0)]);
        assert!(p.divisor.is_some() && p.hypersurface.is_some());
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_problem(&SRC.replace("n = 3", "n = 2")).unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_problem(&SRC.replace("freeness", "freedom")).unwrap_err();
        assert_eq!(e.line, 13);
        let e = parse_problem(&SRC.replace("3*x - 5*y", "3x - 5*y")).unwrap_err();
        assert_eq!(e.line, 10);
        assert!(parse_problem("vars = x\n[tasks]\ncurve-test 1").is_err());
        assert!(parse_problem("vars = x, y\n[arrangement]\nx\n2*x\n[tasks]\narrangement").is_err());
        assert!(parse_problem("[tasks]\nfreeness").is_err());
    }

    #[test]
    fn parses_bases_and_arrangements() {
        let src = "vars = x, y\n[divisor]\ny^2 - x^3\n[basis]\n2*x, 3*y\n2*y, 3*x^2\n[tasks]\ncurve-test 3 4\n";
        let p = parse_problem(src).unwrap();
        assert_eq!(p.basis.as_ref().unwrap().len(), 2);
        assert!(p.validate().is_ok());
        let src = "vars = x0, x1, x2\n[arrangement]\nx0\nx1\nx0 + x1\n[tasks]\narrangement 2\n";
        let p = parse_problem(src).unwrap();
        assert_eq!(p.arrangement.as_ref().unwrap().len(), 3);
        assert_eq!(p.tasks, vec![Task::Arrangement(2)]);
        assert_eq!(p.divisor_equation().unwrap().total_degree(), Some(3));
    }
}
