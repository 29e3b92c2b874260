//! Calendar month arithmetic for monthly panels.

use crate::error::{Error, Result};
use chrono::{Datelike, NaiveDate};
use std::fmt;
use std::str::FromStr;

/// A calendar month (year, month). Ordered, hashable, cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month {
    year: i32,
    month: u8,
}

impl Month {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::BadDate {
                raw: format!("{year}-{month}"),
                reason: "month must be 1..=12".into(),
            });
        }
        Ok(Month {
            year,
            month: month as u8,
        })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month as u32
    }

    /// Months since year 0; gives a total order and distance.
    pub fn index(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn from_index(idx: i64) -> Self {
        let year = idx.div_euclid(12);
        let month = idx.rem_euclid(12) + 1;
        Month {
            year: year as i32,
            month: month as u8,
        }
    }

    pub fn plus(self, months: i64) -> Self {
        Month::from_index(self.index() + months)
    }

    pub fn next(self) -> Self {
        self.plus(1)
    }

    /// self - other, in months.
    pub fn diff(self, other: Month) -> i64 {
        self.index() - other.index()
    }

    pub fn containing(date: NaiveDate) -> Self {
        Month {
            year: date.year(),
            month: date.month() as u8,
        }
    }

    pub fn first_day(self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, self.month as u32, 1).expect("valid month")
    }
}

impl FromStr for Month {
    type Err = Error;

    /// Parses an ISO year-month, `YYYY-MM`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadDate {
            raw: s.to_string(),
            reason: reason.into(),
        };
        let (y, m) = s.split_once('-').ok_or_else(|| bad("expected YYYY-MM"))?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad("expected YYYY-MM"));
        }
        let year: i32 = y.parse().map_err(|_| bad("bad year"))?;
        let month: u32 = m.parse().map_err(|_| bad("bad month"))?;
        Month::new(year, month)
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip() {
        let m: Month = "2020-03".parse().unwrap();
        assert_eq!(m.year(), 2020);
        assert_eq!(m.month(), 3);
        assert_eq!(m.to_string(), "2020-03");
    }

    #[test]
    fn arithmetic_crosses_year_boundary() {
        let m: Month = "2019-11".parse().unwrap();
        assert_eq!(m.plus(3).to_string(), "2020-02");
        assert_eq!(m.plus(3).diff(m), 3);
        assert_eq!(m.next().to_string(), "2019-12");
    }

    #[test]
    fn rejects_bad_input() {
        assert!("2020-13".parse::<Month>().is_err());
        assert!("2020-3".parse::<Month>().is_err());
        assert!("garbage".parse::<Month>().is_err());
        assert!("2020".parse::<Month>().is_err());
    }

    #[test]
    fn containing_date() {
        let d = NaiveDate::from_ymd_opt(2004, 6, 28).unwrap();
        assert_eq!(Month::containing(d).to_string(), "2004-06");
    }
}
