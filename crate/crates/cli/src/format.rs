//! Text output with every real printed to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

/// `x` in scientific notation with 17 significant digits; `NaN`/`inf` verbatim.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Compact JSON whose floats use [`real`]. Non-finite values become `null`.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(real(value).as_bytes())
        } else {
            CompactFormatter.write_null(writer)
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn json<S: Serialize>(value: &S) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("serialising to memory");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn csv_row(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        assert_eq!(real(-3.0), "-3.0000000000000000e0");
        assert_eq!(real(f64::NAN), "NaN");
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE] {
            assert_eq!(real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_floats() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: f64,
            n: u64,
            ok: bool,
        }
        let text = json(&S { a: 0.5, b: f64::NAN, n: 7, ok: true });
        assert_eq!(text, "{\"a\":5.0000000000000000e-1,\"b\":null,\"n\":7,\"ok\":true}\n");
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["a"], 0.5);
    }
}
