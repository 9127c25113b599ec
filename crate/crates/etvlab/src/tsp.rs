//! TSPLIB instance parsing, tour representation, and tour-length evaluation.
//!
//! Instances are symmetric TSPs with one of three edge-weight kinds:
//! `EUC_2D` (rounded Euclidean), `GEO` (geographical), or `EXPLICIT`
//! (`FULL_MATRIX`, `UPPER_ROW`, `LOWER_DIAG_ROW`). The distance matrix is
//! materialized at parse time and immutable afterwards. Tours are canonical
//! permutations that always start at city 0, so a route and its reverse are
//! distinct codings of equal length.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

/// Mean Earth radius used by the TSPLIB geographical distance, in km.
const GEO_RADIUS: f64 = 6378.388;
/// TSPLIB uses this truncated value of pi for GEO coordinates.
const GEO_PI: f64 = 3.141592;

/// Edge-weight kind of a parsed instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Euc2d,
    Geo,
    Explicit,
}

/// Errors raised while parsing a TSPLIB instance file.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("missing required keyword {0}")]
    MissingKeyword(&'static str),
    #[error("unsupported {keyword} value `{value}`")]
    Unsupported { keyword: String, value: String },
    #[error("unrecognized keyword `{0}`")]
    UnknownKeyword(String),
    #[error("invalid {what}: `{value}`")]
    Invalid { what: &'static str, value: String },
    #[error("dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("{section} has {found} entries, expected {expected}")]
    SectionLength {
        section: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("distance matrix is not symmetric: d({i},{j}) = {forward} but d({j},{i}) = {backward}")]
    Asymmetric {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },
    #[error("distance matrix has nonzero diagonal entry d({i},{i}) = {value}")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("negative distance d({i},{j}) = {value}")]
    NegativeDistance { i: usize, j: usize, value: f64 },
    #[error("node index {found} out of range 1..={max} in NODE_COORD_SECTION")]
    NodeIndex { found: i64, max: usize },
}

/// A symmetric TSP instance with a materialized distance matrix.
#[derive(Clone, Debug)]
pub struct TspInstance {
    name: String,
    n: usize,
    weight_kind: WeightKind,
    coords: Option<Vec<(f64, f64)>>,
    /// Row-major n*n matrix; symmetric with zero diagonal.
    dist: Vec<f64>,
}

impl TspInstance {
    /// Parse a TSPLIB-format instance from file contents.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_tsplib(text)
    }

    /// Build an instance from 2-D coordinates using rounded Euclidean
    /// distances (the `EUC_2D` convention).
    pub fn from_euc2d(name: &str, coords: &[(f64, f64)]) -> Result<Self, ParseError> {
        let n = coords.len();
        if n < 3 {
            return Err(ParseError::DimensionTooSmall(n));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = euc2d(coords[i], coords[j]);
            }
        }
        Ok(Self {
            name: name.to_string(),
            n,
            weight_kind: WeightKind::Euc2d,
            coords: Some(coords.to_vec()),
            dist,
        })
    }

    /// Build an instance directly from a full distance matrix.
    /// The matrix must be square, symmetric, nonnegative, with zero diagonal.
    pub fn from_matrix(name: &str, rows: &[Vec<f64>]) -> Result<Self, ParseError> {
        let n = rows.len();
        if n < 3 {
            return Err(ParseError::DimensionTooSmall(n));
        }
        let mut dist = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ParseError::SectionLength {
                    section: "matrix row",
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                dist[i * n + j] = v;
            }
        }
        let inst = Self {
            name: name.to_string(),
            n,
            weight_kind: WeightKind::Explicit,
            coords: None,
            dist,
        };
        inst.validate_matrix()?;
        Ok(inst)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of cities.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.weight_kind
    }

    /// City coordinates when the instance is coordinate-based.
    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    /// Distance between cities `i` and `j`.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Total length of a tour, including the closing edge back to its start.
    pub fn tour_length(&self, tour: &Tour) -> f64 {
        let cities = tour.cities();
        assert_eq!(cities.len(), self.n, "tour does not match instance size");
        let mut total = 0.0;
        for w in cities.windows(2) {
            total += self.dist(w[0] as usize, w[1] as usize);
        }
        total + self.dist(cities[self.n - 1] as usize, cities[0] as usize)
    }

    fn validate_matrix(&self) -> Result<(), ParseError> {
        let n = self.n;
        for i in 0..n {
            let d = self.dist(i, i);
            if d != 0.0 {
                return Err(ParseError::NonzeroDiagonal { i, value: d });
            }
            for j in (i + 1)..n {
                let f = self.dist(i, j);
                let b = self.dist(j, i);
                if f != b {
                    return Err(ParseError::Asymmetric {
                        i,
                        j,
                        forward: f,
                        backward: b,
                    });
                }
                if f < 0.0 {
                    return Err(ParseError::NegativeDistance { i, j, value: f });
                }
            }
        }
        Ok(())
    }
}

/// A Hamiltonian cycle in canonical coding: city 0 is always first.
///
/// Equality is exact sequence equality, so a tour and its reverse are
/// different values even though they describe the same cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tour(Vec<u32>);

impl Tour {
    /// Validate a canonical city sequence.
    pub fn new(cities: Vec<u32>) -> Result<Self, InvalidTour> {
        if cities.len() < 3 {
            return Err(InvalidTour::TooShort(cities.len()));
        }
        if cities[0] != 0 {
            return Err(InvalidTour::NotCanonical(cities[0]));
        }
        let n = cities.len();
        let mut seen = vec![false; n];
        for &c in &cities {
            let c = c as usize;
            if c >= n {
                return Err(InvalidTour::OutOfRange(c as u32, n));
            }
            if seen[c] {
                return Err(InvalidTour::Repeated(c as u32));
            }
            seen[c] = true;
        }
        Ok(Self(cities))
    }

    /// Canonicalize an arbitrary rotation of a cycle so city 0 comes first.
    pub fn from_cycle(cycle: &[u32]) -> Result<Self, InvalidTour> {
        let pos = cycle
            .iter()
            .position(|&c| c == 0)
            .ok_or(InvalidTour::NotCanonical(u32::MAX))?;
        let mut cities = Vec::with_capacity(cycle.len());
        cities.extend_from_slice(&cycle[pos..]);
        cities.extend_from_slice(&cycle[..pos]);
        Self::new(cities)
    }

    pub fn cities(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The reverse coding of the same cycle: city 0 stays first, the rest of
    /// the sequence is reversed. This is an involution.
    pub fn reversed(&self) -> Tour {
        let mut cities = self.0.clone();
        cities[1..].reverse();
        Tour(cities)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvalidTour {
    #[error("tour must visit at least 3 cities, got {0}")]
    TooShort(usize),
    #[error("canonical tours start at city 0, found {0}")]
    NotCanonical(u32),
    #[error("city {0} out of range for {1} cities")]
    OutOfRange(u32, usize),
    #[error("city {0} appears more than once")]
    Repeated(u32),
}

/// Instance-wide lower bound on any tour length: every tour enters and
/// leaves each city once, so half the sum of each city's two cheapest
/// incident edges can never be beaten.
pub fn length_lower_bound(inst: &TspInstance) -> f64 {
    let n = inst.n();
    let mut total = 0.0;
    for i in 0..n {
        let (mut a, mut b) = (f64::INFINITY, f64::INFINITY);
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = inst.dist(i, j);
            if d < a {
                b = a;
                a = d;
            } else if d < b {
                b = d;
            }
        }
        total += a + b;
    }
    total / 2.0
}

/// Reverse coding of a tour; see [`Tour::reversed`].
pub fn reverse_tour(tour: &Tour) -> Tour {
    tour.reversed()
}

/// Uniformly random canonical tour over `n` cities.
pub fn random_tour<R: Rng>(n: usize, rng: &mut R) -> Tour {
    assert!(n >= 3, "need at least 3 cities");
    let mut rest: Vec<u32> = (1..n as u32).collect();
    rest.shuffle(rng);
    let mut cities = Vec::with_capacity(n);
    cities.push(0);
    cities.extend(rest);
    Tour(cities)
}

fn euc2d(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt().round()
}

/// TSPLIB geographical distance: coordinates are DDD.MM (degrees.minutes),
/// the result is truncated to an integer number of kilometers.
fn geo(a: (f64, f64), b: (f64, f64)) -> f64 {
    fn to_radians(x: f64) -> f64 {
        let deg = x.trunc();
        let min = x - deg;
        GEO_PI * (deg + 5.0 * min / 3.0) / 180.0
    }
    let (lat_i, lon_i) = (to_radians(a.0), to_radians(a.1));
    let (lat_j, lon_j) = (to_radians(b.0), to_radians(b.1));
    let q1 = (lon_i - lon_j).cos();
    let q2 = (lat_i - lat_j).cos();
    let q3 = (lat_i + lat_j).cos();
    (GEO_RADIUS * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0).trunc()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EdgeWeightFormat {
    FullMatrix,
    UpperRow,
    LowerDiagRow,
}

/// Parse TSPLIB file contents into an instance with a materialized matrix.
pub fn parse_tsplib(text: &str) -> Result<TspInstance, ParseError> {
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut weight_kind: Option<WeightKind> = None;
    let mut weight_format: Option<EdgeWeightFormat> = None;
    let mut coord_tokens: Vec<String> = Vec::new();
    let mut weight_tokens: Vec<String> = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        Header,
        Coords,
        Weights,
        Skip,
    }
    let mut section = Section::Header;

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        // Section markers and header keys may appear after data sections.
        let upper_start = line
            .split([':', ' ', '\t'])
            .next()
            .unwrap_or("")
            .to_ascii_uppercase();
        let is_keyword = upper_start
            .chars()
            .all(|c| c.is_ascii_uppercase() || c == '_')
            && !upper_start.is_empty()
            && upper_start.chars().any(|c| c.is_ascii_uppercase());
        if is_keyword {
            match upper_start.as_str() {
                "NODE_COORD_SECTION" => {
                    section = Section::Coords;
                    continue;
                }
                "EDGE_WEIGHT_SECTION" => {
                    section = Section::Weights;
                    continue;
                }
                "DISPLAY_DATA_SECTION" => {
                    section = Section::Skip;
                    continue;
                }
                _ => {}
            }
            if let Some((key, value)) = line.split_once(':') {
                let key = key.trim().to_ascii_uppercase();
                let value = value.trim();
                match key.as_str() {
                    "NAME" => name = value.to_string(),
                    "COMMENT" => {}
                    "TYPE" => {
                        if value.to_ascii_uppercase() != "TSP" {
                            return Err(ParseError::Unsupported {
                                keyword: "TYPE".into(),
                                value: value.into(),
                            });
                        }
                    }
                    "DIMENSION" => {
                        dimension = Some(value.parse().map_err(|_| ParseError::Invalid {
                            what: "DIMENSION",
                            value: value.into(),
                        })?);
                    }
                    "EDGE_WEIGHT_TYPE" => {
                        weight_kind = Some(match value.to_ascii_uppercase().as_str() {
                            "EUC_2D" => WeightKind::Euc2d,
                            "GEO" => WeightKind::Geo,
                            "EXPLICIT" => WeightKind::Explicit,
                            _ => {
                                return Err(ParseError::Unsupported {
                                    keyword: "EDGE_WEIGHT_TYPE".into(),
                                    value: value.into(),
                                })
                            }
                        });
                    }
                    "EDGE_WEIGHT_FORMAT" => {
                        weight_format = Some(match value.to_ascii_uppercase().as_str() {
                            "FULL_MATRIX" => EdgeWeightFormat::FullMatrix,
                            "UPPER_ROW" => EdgeWeightFormat::UpperRow,
                            "LOWER_DIAG_ROW" => EdgeWeightFormat::LowerDiagRow,
                            _ => {
                                return Err(ParseError::Unsupported {
                                    keyword: "EDGE_WEIGHT_FORMAT".into(),
                                    value: value.into(),
                                })
                            }
                        });
                    }
                    "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE" => {}
                    other => return Err(ParseError::UnknownKeyword(other.to_string())),
                }
                section = Section::Header;
                continue;
            }
        }
        match section {
            Section::Coords => {
                coord_tokens.extend(line.split_whitespace().map(str::to_string))
            }
            Section::Weights => {
                weight_tokens.extend(line.split_whitespace().map(str::to_string))
            }
            Section::Skip => {}
            Section::Header => return Err(ParseError::UnknownKeyword(line.to_string())),
        }
    }

    let n = dimension.ok_or(ParseError::MissingKeyword("DIMENSION"))?;
    if n < 3 {
        return Err(ParseError::DimensionTooSmall(n));
    }
    let kind = weight_kind.ok_or(ParseError::MissingKeyword("EDGE_WEIGHT_TYPE"))?;

    let coords = if matches!(kind, WeightKind::Euc2d | WeightKind::Geo) {
        Some(parse_coords(&coord_tokens, n)?)
    } else {
        None
    };

    let dist = match kind {
        WeightKind::Euc2d | WeightKind::Geo => {
            let metric = if kind == WeightKind::Euc2d { euc2d } else { geo };
            let pts = coords.as_ref().unwrap();
            let mut dist = vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = metric(pts[i], pts[j]);
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
            dist
        }
        WeightKind::Explicit => {
            let format = weight_format.ok_or(ParseError::MissingKeyword("EDGE_WEIGHT_FORMAT"))?;
            parse_weights(&weight_tokens, n, format)?
        }
    };

    let inst = TspInstance {
        name,
        n,
        weight_kind: kind,
        coords,
        dist,
    };
    inst.validate_matrix()?;
    Ok(inst)
}

fn parse_coords(tokens: &[String], n: usize) -> Result<Vec<(f64, f64)>, ParseError> {
    if tokens.len() != 3 * n {
        return Err(ParseError::SectionLength {
            section: "NODE_COORD_SECTION",
            expected: 3 * n,
            found: tokens.len(),
        });
    }
    let mut coords = vec![None; n];
    for chunk in tokens.chunks(3) {
        let idx: i64 = chunk[0].parse().map_err(|_| ParseError::Invalid {
            what: "node index",
            value: chunk[0].clone(),
        })?;
        if idx < 1 || idx as usize > n {
            return Err(ParseError::NodeIndex { found: idx, max: n });
        }
        let x: f64 = chunk[1].parse().map_err(|_| ParseError::Invalid {
            what: "coordinate",
            value: chunk[1].clone(),
        })?;
        let y: f64 = chunk[2].parse().map_err(|_| ParseError::Invalid {
            what: "coordinate",
            value: chunk[2].clone(),
        })?;
        coords[(idx - 1) as usize] = Some((x, y));
    }
    coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or(ParseError::NodeIndex {
                found: (i + 1) as i64,
                max: n,
            })
        })
        .collect()
}

fn parse_weights(
    tokens: &[String],
    n: usize,
    format: EdgeWeightFormat,
) -> Result<Vec<f64>, ParseError> {
    let expected = match format {
        EdgeWeightFormat::FullMatrix => n * n,
        EdgeWeightFormat::UpperRow => n * (n - 1) / 2,
        EdgeWeightFormat::LowerDiagRow => n * (n + 1) / 2,
    };
    if tokens.len() != expected {
        return Err(ParseError::SectionLength {
            section: "EDGE_WEIGHT_SECTION",
            expected,
            found: tokens.len(),
        });
    }
    let values: Vec<f64> = tokens
        .iter()
        .map(|t| {
            t.parse().map_err(|_| ParseError::Invalid {
                what: "edge weight",
                value: t.clone(),
            })
        })
        .collect::<Result<_, _>>()?;

    let mut dist = vec![0.0; n * n];
    match format {
        EdgeWeightFormat::FullMatrix => {
            dist.copy_from_slice(&values);
        }
        EdgeWeightFormat::UpperRow => {
            let mut it = values.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = it.next().unwrap();
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
        }
        EdgeWeightFormat::LowerDiagRow => {
            let mut it = values.into_iter();
            for i in 0..n {
                for j in 0..=i {
                    let d = it.next().unwrap();
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
        }
    }
    Ok(dist)
}
