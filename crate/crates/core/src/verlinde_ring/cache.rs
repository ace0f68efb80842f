//! JSON persistence of fusion tables.
//!
//! One file per `(p, n)`:
//! `{"schema":1,"p":2,"n":3,"lambda_max":4,"power_matrix":[[..],..],"constants":[[a,b,c,N],..]}`
//! with `lambda_max = |Lambda|` and constants in lexicographic `(a, b, c)` order.
//! Integers are written as exact JSON numbers of any size.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Number, Value};

use super::table::{structure_constants, FusionTable};
use super::VerLevel;
use crate::error::{Error, Result};

pub const TABLE_SCHEMA: u64 = 1;

pub(crate) fn big_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

fn json_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| Error::TableFormat(format!("{n} is not an integer"))),
        other => Err(Error::TableFormat(format!(
            "expected an integer, found {other}"
        ))),
    }
}

fn json_to_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::TableFormat(format!("{what} must be a nonnegative integer")))
}

impl FusionTable {
    pub fn to_json_value(&self) -> Value {
        let level = self.level();
        let power_matrix: Vec<Value> = self
            .power_matrix()
            .iter()
            .map(|row| Value::Array(row.iter().map(big_to_json).collect()))
            .collect();
        let constants: Vec<Value> = self
            .constants()
            .map(|(a, b, c, n)| json!([a, b, c, big_to_json(n)]))
            .collect();
        json!({
            "schema": TABLE_SCHEMA,
            "p": level.p().get(),
            "n": level.n(),
            "lambda_max": level.lambda_bound(),
            "power_matrix": power_matrix,
            "constants": constants,
        })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses and validates a table file; unknown schema versions are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::TableFormat(e.to_string()))?;
        let field = |name: &str| {
            value
                .get(name)
                .ok_or_else(|| Error::TableFormat(format!("missing field {name:?}")))
        };
        let schema = json_to_u64(field("schema")?, "schema")?;
        if schema != TABLE_SCHEMA {
            return Err(Error::TableFormat(format!(
                "unsupported schema version {schema}"
            )));
        }
        let p = json_to_u64(field("p")?, "p")?;
        let n = u32::try_from(json_to_u64(field("n")?, "n")?)
            .map_err(|_| Error::TableFormat("n out of range".into()))?;
        let level = VerLevel::from_raw(p, n)?;
        let len = level.lambda_bound();
        if json_to_u64(field("lambda_max")?, "lambda_max")? != len {
            return Err(Error::TableFormat(format!(
                "lambda_max does not match |Lambda| = {len}"
            )));
        }

        let power_matrix = field("power_matrix")?
            .as_array()
            .ok_or_else(|| Error::TableFormat("power_matrix must be an array".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::TableFormat("power_matrix rows must be arrays".into()))?
                    .iter()
                    .map(json_to_big)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let mut products = vec![BTreeMap::new(); (len * len) as usize];
        let mut previous: Option<(u64, u64, u64)> = None;
        let entries = field("constants")?
            .as_array()
            .ok_or_else(|| Error::TableFormat("constants must be an array".into()))?;
        for entry in entries {
            let quad = entry
                .as_array()
                .filter(|q| q.len() == 4)
                .ok_or_else(|| Error::TableFormat("constants entries must be [a,b,c,N]".into()))?;
            let a = json_to_u64(&quad[0], "a")?;
            let b = json_to_u64(&quad[1], "b")?;
            let c = json_to_u64(&quad[2], "c")?;
            for x in [a, b, c] {
                level.check_label(x)?;
            }
            if previous.is_some_and(|prev| prev >= (a, b, c)) {
                return Err(Error::TableFormat(
                    "constants are not sorted by (a,b,c)".into(),
                ));
            }
            previous = Some((a, b, c));
            products[(a * len + b) as usize].insert(c, json_to_big(&quad[3])?);
        }

        let table = FusionTable::from_parts(level, power_matrix, products);
        table.validate()?;
        Ok(table)
    }
}

/// Where a table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Built,
}

/// Directory of persisted tables, written atomically (temp file, then rename).
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, level: VerLevel) -> PathBuf {
        self.dir
            .join(format!("fusion_p{}_n{}.json", level.p(), level.n()))
    }

    pub fn load(&self, level: VerLevel) -> Result<Option<FusionTable>> {
        let path = self.path_for(level);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let table = FusionTable::from_json(&text)?;
        if table.level() != level {
            return Err(Error::TableFormat(format!(
                "{} holds {}, expected {level}",
                path.display(),
                table.level()
            )));
        }
        Ok(Some(table))
    }

    pub fn store(&self, table: &FusionTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(table.level());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(table.to_json().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path)
            .map_err(|e| Error::Io(e.error.to_string()))?;
        Ok(path)
    }

    pub fn get_or_build(
        &self,
        level: VerLevel,
        budget: u128,
    ) -> Result<(FusionTable, CacheOutcome)> {
        if let Some(table) = self.load(level)? {
            return Ok((table, CacheOutcome::Hit));
        }
        let table = structure_constants(level, budget)?;
        self.store(&table)?;
        Ok((table, CacheOutcome::Built))
    }
}
