//! Parsing of function, domain and cutoff strings given on the command line.

use std::path::Path;

use orlicz_core::extension::CutoffFunction;
use orlicz_core::grid::{Domain, GridFunction, Interp};
use orlicz_core::{Error, Result};

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{v}' in '{s}'"))))
        .collect()
}

fn exactly<const N: usize>(form: &str, s: &str) -> Result<[f64; N]> {
    let v = numbers(s)?;
    v.try_into().map_err(|_| Error::Parse(format!("{form} takes {N} numbers, got '{s}'")))
}

/// `lo,hi` for an interval, `x0,x1,y0,y1` for a box.
pub fn parse_domain(s: &str) -> Result<Domain> {
    match *numbers(s)?.as_slice() {
        [a, b] if a < b => Ok(Domain::Interval { a, b }),
        [x0, x1, y0, y1] if x0 < x1 && y0 < y1 => Ok(Domain::Box { x0, x1, y0, y1 }),
        _ => Err(Error::Parse(format!("domain must be 'lo,hi' or 'x0,x1,y0,y1' with lo < hi, got '{s}'"))),
    }
}

fn sample(domain: Domain, cells: usize, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
    match domain {
        Domain::Box { x0, x1, y0, y1 } => GridFunction::sample_box((x0, x1), (y0, y1), cells, cells, f),
        d => GridFunction::sample(d, cells, |x| f(x, 0.0)),
    }
}

fn one_d(form: &str, d: Domain) -> Result<Domain> {
    if d.dim() == 1 {
        Ok(d)
    } else {
        Err(Error::Parse(format!("'{form}' is a function of one variable")))
    }
}

/// Builds a grid function from a spec:
///
/// | spec | function | default domain |
/// |---|---|---|
/// | `chi:a,b` | indicator of (a, b) | (a, b), one cell |
/// | `tent:a,b` | hat peaked at the midpoint, linear reading | (a, b) |
/// | `bump:a,b` | `(1 − y²)²` rescaled to (a, b), Hermite reading | (a, b) |
/// | `power:e` | `x^e` | (0, 1) |
/// | `steps:v1,v2,...` | one cell per value | (0, count) |
/// | `disk:r` | indicator of the disk of radius r | (−1, 1)² |
/// | `cone:r` | `(r − |x|)₊`, bilinear reading | (−1, 1)² |
/// | `csv:path` | a 1-D grid written by this tool | from the file |
pub fn parse_function(spec: &str, domain: Option<Domain>, cells: usize) -> Result<GridFunction> {
    let (form, rest) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("missing form in function '{spec}'")))?;
    if cells == 0 {
        return Err(Error::Parse("cells must be positive".into()));
    }
    let unit_box = Domain::Box { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
    match form {
        "chi" => {
            let [a, b] = exactly("chi", rest)?;
            match domain {
                None => GridFunction::interval(a, b, vec![1.0]),
                Some(d) => sample(one_d(form, d)?, cells, |x, _| if x > a && x < b { 1.0 } else { 0.0 }),
            }
        }
        "tent" => {
            let [a, b] = exactly("tent", rest)?;
            let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
            let d = one_d(form, domain.unwrap_or(Domain::Interval { a, b }))?;
            Ok(sample(d, cells, |x, _| (1.0 - (x - m).abs() / r).max(0.0))?.with_interp(Interp::Linear))
        }
        "bump" => {
            let [a, b] = exactly("bump", rest)?;
            let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
            let d = one_d(form, domain.unwrap_or(Domain::Interval { a, b }))?;
            let f = |x: f64| {
                let y = (x - m) / r;
                if y.abs() < 1.0 { (1.0 - y * y).powi(2) } else { 0.0 }
            };
            let df = |x: f64| {
                let y = (x - m) / r;
                if y.abs() < 1.0 { -4.0 * y * (1.0 - y * y) / r } else { 0.0 }
            };
            let u = sample(d, cells, |x, _| f(x))?;
            let slopes = (0..u.len()).map(|i| df(u.center(i))).collect();
            u.with_derivative(slopes)
        }
        "power" => {
            let [e] = exactly("power", rest)?;
            let d = one_d(form, domain.unwrap_or(Domain::Interval { a: 0.0, b: 1.0 }))?;
            sample(d, cells, |x, _| x.abs().powf(e))
        }
        "steps" => {
            let v = numbers(rest)?;
            let d = one_d(form, domain.unwrap_or(Domain::Interval { a: 0.0, b: v.len() as f64 }))?;
            GridFunction::new(d, v.len(), 1, v)
        }
        "disk" => {
            let [r] = exactly("disk", rest)?;
            sample(domain.unwrap_or(unit_box), cells, |x, y| if x.hypot(y) < r { 1.0 } else { 0.0 })
        }
        "cone" => {
            let [r] = exactly("cone", rest)?;
            Ok(sample(domain.unwrap_or(unit_box), cells, |x, y| (r - x.hypot(y)).max(0.0))?.with_interp(Interp::Linear))
        }
        "csv" => read_csv(Path::new(rest)),
        other => Err(Error::Parse(format!("unknown function form '{other}'"))),
    }
}

/// Reads `index,x,value` rows with equally spaced centres.
fn read_csv(path: &Path) -> Result<GridFunction> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if row.len() != 3 {
            return Err(Error::Parse(format!("{}: expected rows 'index,x,value'", path.display())));
        }
        let num = |k: usize| row[k].trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{}'", &row[k])));
        xs.push(num(1)?);
        vs.push(num(2)?);
    }
    if xs.len() < 2 {
        return Err(Error::Parse(format!("{}: need at least two rows", path.display())));
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    GridFunction::interval(xs[0] - 0.5 * h, xs[xs.len() - 1] + 0.5 * h, vs)
}

/// `const:c`, `ramp:cx,cy,height,slope` or `step:start,end`.
pub fn parse_cutoff(s: &str) -> Result<CutoffFunction> {
    let (form, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("missing form in cutoff '{s}'")))?;
    match form {
        "const" => {
            let [c] = exactly("const", rest)?;
            Ok(CutoffFunction::constant(c))
        }
        "ramp" => {
            let [cx, cy, h, k] = exactly("ramp", rest)?;
            Ok(CutoffFunction::ramp((cx, cy), h, k))
        }
        "step" => {
            let [a, b] = exactly("step", rest)?;
            Ok(CutoffFunction::step_up(a, b))
        }
        other => Err(Error::Parse(format!("unknown cutoff form '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_defaults_to_its_interval() {
        let u = parse_function("chi:0,2", None, 64).unwrap();
        assert_eq!(u.domain(), Domain::Interval { a: 0.0, b: 2.0 });
        assert_eq!(u.values(), &[1.0]);
    }

    #[test]
    fn chi_on_a_wider_domain() {
        let u = parse_function("chi:0,1", Some(Domain::Interval { a: 0.0, b: 4.0 }), 8).unwrap();
        assert_eq!(u.values(), &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(parse_function("chi:0", None, 8).is_err());
        assert!(parse_function("wave:1", None, 8).is_err());
        assert!(parse_function("tent:0,1", Some(parse_domain("0,1,0,1").unwrap()), 8).is_err());
        assert!(parse_domain("1,0").is_err());
        assert!(parse_cutoff("ramp:1").is_err());
    }
}
