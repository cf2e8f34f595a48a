//! Region codes and balanced regional subsetting.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use super::{DataError, PanelDataset};

/// The nine region codes the regional analysis understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// Europe
    Eu,
    /// Asia
    As,
    /// North Africa
    Af,
    /// North America
    Na,
    /// Latin America
    La,
    /// Oceania
    Oc,
    /// Fragile-Conflict states
    Fc,
    /// Sub-Saharan
    Ss,
    /// Post-Soviet
    Ps,
}

impl Region {
    /// All codes in their canonical reporting order.
    pub const ALL: [Region; 9] = [
        Region::Eu,
        Region::As,
        Region::Af,
        Region::Na,
        Region::La,
        Region::Oc,
        Region::Fc,
        Region::Ss,
        Region::Ps,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Region::Eu => "EU",
            Region::As => "AS",
            Region::Af => "AF",
            Region::Na => "NA",
            Region::La => "LA",
            Region::Oc => "OC",
            Region::Fc => "FC",
            Region::Ss => "SS",
            Region::Ps => "PS",
        }
    }
}

impl FromStr for Region {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "EU" => Ok(Region::Eu),
            "AS" => Ok(Region::As),
            "AF" => Ok(Region::Af),
            "NA" => Ok(Region::Na),
            "LA" => Ok(Region::La),
            "OC" => Ok(Region::Oc),
            "FC" => Ok(Region::Fc),
            "SS" => Ok(Region::Ss),
            "PS" => Ok(Region::Ps),
            other => Err(DataError::UnknownRegion(other.to_string())),
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Entity -> region assignment.
#[derive(Debug, Clone, Default)]
pub struct RegionMap {
    assignments: HashMap<String, Region>,
}

impl RegionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, entity: impl Into<String>, region: Region) {
        self.assignments.insert(entity.into(), region);
    }

    pub fn region_of(&self, entity: &str) -> Option<Region> {
        self.assignments.get(entity).copied()
    }

    /// Loads a `entity,region` CSV.
    pub fn load_csv(path: &Path) -> Result<Self, DataError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)?;
        let mut map = RegionMap::new();
        for record in reader.records() {
            let record = record?;
            let entity = record.get(0).unwrap_or("").to_string();
            let region: Region = record.get(1).unwrap_or("").parse()?;
            map.assign(entity, region);
        }
        Ok(map)
    }

    /// Checks that every mapped entity exists in the dataset.
    pub fn validate_against(&self, dataset: &PanelDataset) -> Result<(), DataError> {
        for entity in self.assignments.keys() {
            if !dataset.entities().iter().any(|e| e == entity) {
                return Err(DataError::UnknownEntity(entity.clone()));
            }
        }
        Ok(())
    }

    /// Regions present in the map, in canonical order.
    pub fn regions(&self) -> Vec<Region> {
        Region::ALL
            .iter()
            .copied()
            .filter(|r| self.assignments.values().any(|v| v == r))
            .collect()
    }
}

/// Extracts the balanced sub-panel of entities mapped to `region`.
///
/// Entity order follows the parent dataset, so the subset observation count
/// is always |region entities| x |periods|.
pub fn subset_region(
    dataset: &PanelDataset,
    map: &RegionMap,
    region: Region,
) -> Result<PanelDataset, DataError> {
    map.validate_against(dataset)?;
    let keep: Vec<usize> = dataset
        .entities()
        .iter()
        .enumerate()
        .filter(|(_, name)| map.region_of(name) == Some(region))
        .map(|(i, _)| i)
        .collect();
    if keep.is_empty() {
        return Err(DataError::EmptyRegion(region.code().to_string()));
    }
    let entities: Vec<String> = keep.iter().map(|&i| dataset.entities()[i].clone()).collect();
    let nv = dataset.variables().len();
    let np = dataset.n_periods();
    let mut values = Vec::with_capacity(keep.len() * np * nv);
    for &e in &keep {
        for t in 0..np {
            for v in 0..nv {
                values.push(dataset.value(e, t, v));
            }
        }
    }
    let subset = PanelDataset::from_parts(
        entities,
        dataset.periods().to_vec(),
        dataset.variables().to_vec(),
        values,
    )?;
    Ok(subset.with_transformed_flag(dataset.is_transformed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(n_entities: usize, n_periods: usize) -> PanelDataset {
        let entities: Vec<String> = (0..n_entities).map(|i| format!("E{i:03}")).collect();
        let periods: Vec<i32> = (0..n_periods as i32).map(|t| 1995 + t).collect();
        let values: Vec<f64> = (0..n_entities * n_periods).map(|i| i as f64).collect();
        PanelDataset::from_parts(entities, periods, vec!["x".into()], values).unwrap()
    }

    #[test]
    fn whole_sample_subset_is_identity() {
        let d = panel(3, 4);
        let mut map = RegionMap::new();
        for e in d.entities() {
            map.assign(e.clone(), Region::Eu);
        }
        let s = subset_region(&d, &map, Region::Eu).unwrap();
        assert_eq!(s, d);
    }

    #[test]
    fn eu_42_entities_22_periods_has_924_observations() {
        let d = panel(50, 22);
        let mut map = RegionMap::new();
        for (i, e) in d.entities().iter().enumerate() {
            map.assign(e.clone(), if i < 42 { Region::Eu } else { Region::Ss });
        }
        let s = subset_region(&d, &map, Region::Eu).unwrap();
        assert_eq!(s.n_obs(), 924);
        assert_eq!(s.n_entities(), 42);
    }

    #[test]
    fn ps_15_entities_22_periods_has_330_observations() {
        let d = panel(20, 22);
        let mut map = RegionMap::new();
        for (i, e) in d.entities().iter().enumerate() {
            map.assign(e.clone(), if i < 15 { Region::Ps } else { Region::Eu });
        }
        let s = subset_region(&d, &map, Region::Ps).unwrap();
        assert_eq!(s.n_obs(), 330);
    }

    #[test]
    fn empty_region_errors() {
        let d = panel(3, 2);
        let mut map = RegionMap::new();
        map.assign("E000", Region::Eu);
        assert!(matches!(
            subset_region(&d, &map, Region::Ps),
            Err(DataError::EmptyRegion(_))
        ));
    }

    #[test]
    fn unknown_entity_in_map_errors() {
        let d = panel(2, 2);
        let mut map = RegionMap::new();
        map.assign("NOT_THERE", Region::Eu);
        assert!(matches!(
            subset_region(&d, &map, Region::Eu),
            Err(DataError::UnknownEntity(_))
        ));
    }

    #[test]
    fn unknown_region_code_errors() {
        assert!(matches!(
            "XX".parse::<Region>(),
            Err(DataError::UnknownRegion(_))
        ));
    }
}
