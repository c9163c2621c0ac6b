//! Dense functions on shade tuples `[t_1] x ... x [t_g]`, row-major with the last index fastest.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{LabError, Result};
use crate::rational::{rational_from_json, rational_to_json, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFunction<T> {
    shape: Vec<usize>,
    entries: Vec<T>,
}

/// All shade tuples of `shape` (1-based) in row-major order.
pub fn shade_tuples(shape: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = shape.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![1usize; shape.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for i in (0..shape.len()).rev() {
            if cur[i] < shape[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
    }
    out
}

impl<T> TableFunction<T> {
    pub fn new(shape: Vec<usize>, entries: Vec<T>) -> Result<Self> {
        if shape.contains(&0) {
            return Err(LabError::invalid("table shape entries must be positive"));
        }
        let total: usize = shape.iter().product();
        if total != entries.len() {
            return Err(LabError::invalid(format!(
                "table of shape {shape:?} needs {total} entries, got {}",
                entries.len()
            )));
        }
        Ok(TableFunction { shape, entries })
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let entries = shade_tuples(&shape).iter().map(|t| f(t)).collect();
        TableFunction { shape, entries }
    }

    pub fn try_from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> Result<T>) -> Result<Self> {
        let entries = shade_tuples(&shape).iter().map(|t| f(t)).collect::<Result<Vec<_>>>()?;
        Ok(TableFunction { shape, entries })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Row-major offset of a 1-based shade tuple.
    pub fn index_of(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.shape.len() {
            return Err(LabError::invalid(format!(
                "shade tuple {tuple:?} has wrong length for shape {:?}",
                self.shape
            )));
        }
        let mut idx = 0;
        for (&j, &t) in tuple.iter().zip(&self.shape) {
            if j == 0 || j > t {
                return Err(LabError::invalid(format!("shade tuple {tuple:?} outside shape {:?}", self.shape)));
            }
            idx = idx * t + (j - 1);
        }
        Ok(idx)
    }

    pub fn get(&self, tuple: &[usize]) -> Result<&T> {
        Ok(&self.entries[self.index_of(tuple)?])
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        shade_tuples(&self.shape)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> TableFunction<U> {
        TableFunction { shape: self.shape.clone(), entries: self.entries.iter().map(f).collect() }
    }

    pub fn zip_with<U, V>(&self, other: &TableFunction<U>, mut f: impl FnMut(&T, &U) -> V) -> Result<TableFunction<V>> {
        if self.shape != other.shape {
            return Err(LabError::invalid(format!(
                "table shapes differ: {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(TableFunction { shape: self.shape.clone(), entries })
    }
}

impl TableFunction<u64> {
    pub fn to_rational(&self) -> TableFunction<Rational> {
        self.map(|&x| Rational::from_integer(BigInt::from(x)))
    }
}

impl TableFunction<Rational> {
    /// `max_j |self(j) - other(j)|`.
    pub fn sup_distance(&self, other: &TableFunction<Rational>) -> Result<Rational> {
        let d = self.zip_with(other, |a, b| num_traits::Signed::abs(&(a - b)))?;
        Ok(d.entries.into_iter().max().unwrap_or_default())
    }
}

/// JSON representation of a table entry.
pub trait TableEntry: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl TableEntry for u64 {
    fn to_json(&self) -> Value {
        Value::from(*self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_u64().ok_or_else(|| LabError::invalid(format!("expected a nonnegative integer, got {v}")))
    }
}

impl TableEntry for i64 {
    fn to_json(&self) -> Value {
        Value::from(*self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_i64().ok_or_else(|| LabError::invalid(format!("expected an integer, got {v}")))
    }
}

impl TableEntry for Rational {
    fn to_json(&self) -> Value {
        rational_to_json(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        rational_from_json(v)
    }
}

impl<T: TableEntry> Serialize for TableFunction<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "shape": self.shape,
            "entries": self.entries.iter().map(TableEntry::to_json).collect::<Vec<_>>(),
        })
        .serialize(s)
    }
}

impl<'de, T: TableEntry> Deserialize<'de> for TableFunction<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            shape: Vec<usize>,
            entries: Vec<Value>,
        }
        let raw = Raw::deserialize(d)?;
        let entries = raw
            .entries
            .iter()
            .map(T::from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        TableFunction::new(raw.shape, entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_last_fastest() {
        let t = TableFunction::from_fn(vec![2, 3], |j| (10 * j[0] + j[1]) as u64);
        assert_eq!(t.entries(), &[11, 12, 13, 21, 22, 23]);
        assert_eq!(*t.get(&[2, 1]).unwrap(), 21);
        assert!(t.get(&[3, 1]).is_err());
        assert!(t.get(&[0, 1]).is_err());
    }

    #[test]
    fn empty_shape_has_one_entry() {
        let t = TableFunction::from_fn(vec![], |_| 5u64);
        assert_eq!(t.entries(), &[5]);
        assert_eq!(*t.get(&[]).unwrap(), 5);
    }

    #[test]
    fn json_round_trip() {
        let t = TableFunction::from_fn(vec![2, 1], |j| Rational::new(BigInt::from(j[0] as i64), BigInt::from(3)));
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["shape"], serde_json::json!([2, 1]));
        assert_eq!(v["entries"][0], serde_json::json!({"num": "1", "den": "3"}));
        let back: TableFunction<Rational> = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_value::<TableFunction<u64>>(serde_json::json!({"shape": [2], "entries": [1]})).is_err());
    }
}
