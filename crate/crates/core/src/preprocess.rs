//! Column recipes turning a raw string table into a numeric design matrix.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Raw tokens treated as missing.
pub const MISSING_TOKENS: [&str; 2] = ["", "NA"];

/// Name of the synthetic level that absorbs missing categorical values.
pub const MISSING_LEVEL: &str = "<missing>";

pub const DEFAULT_PERIOD: f64 = 360.0;

pub fn is_missing(token: &str) -> bool {
    MISSING_TOKENS.contains(&token.trim())
}

/// A table of string cells with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    names: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn new(names: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::SchemaMismatch("duplicate column names".into()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != names.len()) {
            return Err(Error::SchemaMismatch(format!(
                "row {i} has {} fields, header has {}",
                row.len(),
                names.len()
            )));
        }
        Ok(Self { names, rows })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::SchemaMismatch(format!("column '{name}' not found")))
    }

    pub fn column(&self, index: usize) -> impl Iterator<Item = &str> + '_ {
        self.rows.iter().map(move |r| r[index].as_str())
    }

    /// Removes the named column and returns its values.
    pub fn take_column(&mut self, name: &str) -> Result<Vec<String>> {
        let idx = self.column_index(name)?;
        self.names.remove(idx);
        Ok(self.rows.iter_mut().map(|r| r.remove(idx)).collect())
    }

    /// Drops the named columns.
    pub fn drop_columns(&mut self, names: &[String]) -> Result<()> {
        for name in names {
            self.take_column(name)?;
        }
        Ok(())
    }

    /// Table restricted to the given rows.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            names: self.names.clone(),
            rows: rows.iter().map(|&r| self.rows[r].clone()).collect(),
        }
    }
}

/// Which columns get non-default treatment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecipeOptions {
    /// Angle columns and their periods.
    pub cyclic: BTreeMap<String, f64>,
    /// Columns forced to be categorical even when every value parses as a number.
    pub categorical: BTreeSet<String>,
}

impl RecipeOptions {
    pub fn with_cyclic(mut self, name: impl Into<String>, period: f64) -> Self {
        self.cyclic.insert(name.into(), period);
        self
    }

    pub fn with_categorical(mut self, name: impl Into<String>) -> Self {
        self.categorical.insert(name.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Transform {
    Numeric { median: f64, add_missing_indicator: bool },
    /// One column per level; the last level is [`MISSING_LEVEL`].
    Categorical { levels: Vec<String> },
    Cyclic { period: f64, median: f64, add_missing_indicator: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnRecipe {
    pub name: String,
    pub transform: Transform,
    pub outputs: Vec<String>,
}

/// Fitted transforms for every input column, in input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub columns: Vec<ColumnRecipe>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn parse_numeric(name: &str, token: &str) -> Result<Option<f64>> {
    if is_missing(token) {
        return Ok(None);
    }
    match token.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(Error::SchemaMismatch(format!("column '{name}': '{token}' is not a finite number"))),
    }
}

fn fit_numeric(name: &str, tokens: Vec<&str>) -> Result<(f64, bool)> {
    let mut values = Vec::with_capacity(tokens.len());
    let mut missing = false;
    for t in tokens {
        match parse_numeric(name, t)? {
            Some(v) => values.push(v),
            None => missing = true,
        }
    }
    if values.is_empty() {
        return Err(Error::AllMissing(name.to_string()));
    }
    Ok((median(&mut values), missing))
}

/// Fits a recipe on a training table.
pub fn fit_recipe(table: &RawTable, options: &RecipeOptions) -> Result<Recipe> {
    if table.n_rows() == 0 || table.names().is_empty() {
        return Err(Error::InvalidDataset("empty table".into()));
    }
    for name in options.cyclic.keys().chain(options.categorical.iter()) {
        table.column_index(name)?;
    }
    let mut columns = Vec::with_capacity(table.names().len());
    for (idx, name) in table.names().iter().enumerate() {
        let tokens: Vec<&str> = table.column(idx).collect();
        let observed = || tokens.iter().filter(|t| !is_missing(t));
        let numeric = observed().all(|t| t.trim().parse::<f64>().is_ok_and(f64::is_finite));
        let transform = if let Some(&period) = options.cyclic.get(name) {
            if !(period > 0.0 && period.is_finite()) {
                return Err(Error::Domain(format!("column '{name}': period {period} must be positive")));
            }
            let (median, add_missing_indicator) = fit_numeric(name, tokens.clone())?;
            Transform::Cyclic { period, median, add_missing_indicator }
        } else if numeric && !options.categorical.contains(name) {
            let (median, add_missing_indicator) = fit_numeric(name, tokens.clone())?;
            Transform::Numeric { median, add_missing_indicator }
        } else {
            let distinct: BTreeSet<&str> = observed().map(|t| t.trim()).collect();
            let mut levels: Vec<String> = distinct.into_iter().map(String::from).collect();
            levels.push(MISSING_LEVEL.to_string());
            Transform::Categorical { levels }
        };
        let outputs = output_names(name, &transform);
        columns.push(ColumnRecipe { name: name.clone(), transform, outputs });
    }
    Ok(Recipe { columns })
}

fn output_names(name: &str, t: &Transform) -> Vec<String> {
    match t {
        Transform::Numeric { add_missing_indicator, .. } => {
            let mut out = vec![name.to_string()];
            if *add_missing_indicator {
                out.push(format!("{name}_missing"));
            }
            out
        }
        Transform::Categorical { levels } => levels.iter().map(|l| format!("{name}={l}")).collect(),
        Transform::Cyclic { add_missing_indicator, .. } => {
            let mut out = vec![format!("{name}_cos"), format!("{name}_sin")];
            if *add_missing_indicator {
                out.push(format!("{name}_missing"));
            }
            out
        }
    }
}

impl Recipe {
    /// Names of the encoded columns, in output order.
    pub fn output_names(&self) -> Vec<String> {
        self.columns.iter().flat_map(|c| c.outputs.iter().cloned()).collect()
    }

    pub fn n_outputs(&self) -> usize {
        self.columns.iter().map(|c| c.outputs.len()).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Encodes `table` with a fitted recipe. Columns are matched by name; extra
/// columns in `table` are ignored.
pub fn apply_recipe(recipe: &Recipe, table: &RawTable) -> Result<(Array2<f64>, Vec<String>)> {
    let n = table.n_rows();
    let width = recipe.n_outputs();
    let mut x = Array2::<f64>::zeros((n, width));
    let mut offset = 0;
    for col in &recipe.columns {
        let idx = table.column_index(&col.name)?;
        match &col.transform {
            Transform::Numeric { median, add_missing_indicator } => {
                for (r, token) in table.column(idx).enumerate() {
                    match parse_numeric(&col.name, token)? {
                        Some(v) => x[[r, offset]] = v,
                        None => {
                            x[[r, offset]] = *median;
                            if *add_missing_indicator {
                                x[[r, offset + 1]] = 1.0;
                            }
                        }
                    }
                }
            }
            Transform::Cyclic { period, median, add_missing_indicator } => {
                for (r, token) in table.column(idx).enumerate() {
                    let parsed = parse_numeric(&col.name, token)?;
                    let angle = 2.0 * PI * parsed.unwrap_or(*median) / period;
                    x[[r, offset]] = angle.cos();
                    x[[r, offset + 1]] = angle.sin();
                    if parsed.is_none() && *add_missing_indicator {
                        x[[r, offset + 2]] = 1.0;
                    }
                }
            }
            Transform::Categorical { levels } => {
                let mut unseen = BTreeSet::new();
                for (r, token) in table.column(idx).enumerate() {
                    let level = if is_missing(token) { MISSING_LEVEL } else { token.trim() };
                    match levels.iter().position(|l| l == level) {
                        Some(k) => x[[r, offset + k]] = 1.0,
                        None => {
                            unseen.insert(level.to_string());
                        }
                    }
                }
                if !unseen.is_empty() {
                    log::warn!(
                        "column '{}': unseen levels {:?} encoded as all zeros",
                        col.name,
                        unseen.into_iter().collect::<Vec<_>>()
                    );
                }
            }
        }
        offset += col.outputs.len();
    }
    Ok((x, recipe.output_names()))
}
