use std::io::{Read, Write};

use num_bigint::BigInt;

use super::GameTranscript;
use crate::error::{Error, Result};
use crate::learners::Prediction;
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

pub const CSV_HEADER: [&str; 11] = [
    "round",
    "instance",
    "prediction",
    "set",
    "sampled_loss",
    "expected_loss_num",
    "expected_loss_den",
    "cum_expected",
    "comparator",
    "regret_num",
    "regret_den",
];

fn prediction_field(p: &Prediction) -> String {
    match p {
        Prediction::Label(y) => y.to_string(),
        Prediction::Distribution(mu) => mu
            .weights()
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join("|"),
    }
}

/// Writes the transcript; a label prediction is the label, a distribution is
/// its weights as `a/b` joined by `|`.
pub fn write_csv<W: Write>(transcript: &GameTranscript, out: W) -> Result<()> {
    let mut w = ::csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &transcript.rounds {
        w.write_record([
            r.round.to_string(),
            r.instance.to_string(),
            prediction_field(&r.prediction),
            r.set.to_string(),
            r.sampled_loss.map(|l| l.to_string()).unwrap_or_default(),
            r.expected_loss.numer().to_string(),
            r.expected_loss.denom().to_string(),
            format_rational(&r.cum_expected),
            r.comparator.to_string(),
            r.regret.numer().to_string(),
            r.regret.denom().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One parsed transcript line.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub round: usize,
    pub instance: usize,
    pub prediction: String,
    pub set: usize,
    pub sampled_loss: Option<u8>,
    pub expected_loss: Rational,
    pub cum_expected: Rational,
    pub comparator: usize,
    pub regret: Rational,
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = ::csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::parse(
            "header",
            format!("unexpected header {header:?}"),
        ));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let int = |i: usize| -> Result<usize> {
            rec[i]
                .parse()
                .map_err(|_| Error::parse(CSV_HEADER[i], format!("bad integer {:?}", &rec[i])))
        };
        let big = |i: usize| -> Result<BigInt> {
            rec[i]
                .parse()
                .map_err(|_| Error::parse(CSV_HEADER[i], format!("bad integer {:?}", &rec[i])))
        };
        let ratio = |n: usize, d: usize| -> Result<Rational> {
            let den = big(d)?;
            if den == BigInt::from(0) {
                return Err(Error::parse(CSV_HEADER[d], "zero denominator"));
            }
            Ok(Rational::new(big(n)?, den))
        };
        rows.push(CsvRow {
            round: int(0)?,
            instance: int(1)?,
            prediction: rec[2].to_string(),
            set: int(3)?,
            sampled_loss: if rec[4].is_empty() {
                None
            } else {
                Some(
                    rec[4]
                        .parse()
                        .map_err(|_| Error::parse("sampled_loss", "expected 0 or 1"))?,
                )
            },
            expected_loss: ratio(5, 6)?,
            cum_expected: parse_rational(&rec[7])?,
            comparator: int(8)?,
            regret: ratio(9, 10)?,
        });
    }
    Ok(rows)
}
