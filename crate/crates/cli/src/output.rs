use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

/// C's `%.17g`.
pub fn g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        strip_zeros(&format!("{v:.*}", (16 - exp) as usize)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `None`, `-` and `csv` mean stdout.
pub fn sink(path: Option<&str>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        None | Some("-") | Some("csv") => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
    })
}

pub struct Table {
    w: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn new(out: Box<dyn Write>, header: &[String]) -> io::Result<Self> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(header).map_err(io_error)?;
        Ok(Self { w })
    }

    pub fn row(&mut self, cells: &[String]) -> io::Result<()> {
        self.w.write_record(cells).map_err(io_error)
    }

    pub fn nums(&mut self, values: &[f64]) -> io::Result<()> {
        self.w.write_record(values.iter().map(|&v| g17(v))).map_err(io_error)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.w.flush()
    }
}

fn io_error(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        k => io::Error::other(format!("{k:?}")),
    }
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'a str,
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

pub fn json(mut out: Box<dyn Write>, schema: &str, body: impl Serialize) -> io::Result<()> {
    let env = Envelope { schema, schema_version: SCHEMA_VERSION, body };
    serde_json::to_writer_pretty(&mut out, &env)?;
    writeln!(out)?;
    out.flush()
}
