//! Projective points and subvarieties of `P^n`.
//!
//! A variety is either parametrized (components of a homogeneous polynomial
//! map, possibly multihomogeneous across parameter blocks for coordinatewise
//! products) or implicit (homogeneous generators plus a declared dimension).
//! This module owns generic point sampling, tangent frames of the affine
//! cone, coordinate-hyperplane support, the `PGL(n+1)` action, and the
//! textual variety description files.

use crate::field::Fp;
use crate::matrix::Matrix;
use crate::poly::{self, IntPoly, MultiPoly, PolyError, UniPoly};
use crate::rng::SeedStream;
use serde::Serialize;
use thiserror::Error;

/// Attempts before sampling gives up on a representation.
pub const SAMPLE_RETRIES: usize = 64;

/// Random samples used to certify a generic tangent rank.
pub const GENERIC_RANK_TRIALS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error("projective point needs a nonzero coordinate")]
    ZeroPoint,
    #[error("no point found on `{name}` after {retries} attempts")]
    NoPointFound { name: String, retries: usize },
    #[error("cannot sample `{name}`: implicit varieties of codimension >= 2 need a known point")]
    UnsupportedRepresentation { name: String },
    #[error("singular point on `{name}`: tangent frame has {got} columns, declared dimension {declared} expects {expected}")]
    SingularPoint { name: String, got: usize, declared: usize, expected: usize },
    #[error("transform must be an invertible {side}x{side} matrix")]
    SingularTransform { side: usize },
    #[error("bad variety description: {0}")]
    BadDescription(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Point of `P^n`, stored with its first nonzero coordinate scaled to 1 so
/// that equality is plain coordinate equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ProjectivePoint {
    coords: Vec<u64>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<u64>, fp: &Fp) -> Result<Self, VarietyError> {
        let mut coords = coords;
        normalize_in_place(&mut coords, fp)?;
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Ambient projective dimension `n` (one less than the vector length).
    pub fn ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn has_zero_coordinate(&self) -> bool {
        self.coords.iter().any(|&c| c == 0)
    }

    pub fn all_ones(n: usize) -> Self {
        ProjectivePoint { coords: vec![1; n + 1] }
    }
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Scale a coordinate vector so its first nonzero entry is 1.
pub(crate) fn normalize_in_place(coords: &mut [u64], fp: &Fp) -> Result<(), VarietyError> {
    let lead = coords
        .iter()
        .position(|&c| c != 0)
        .ok_or(VarietyError::ZeroPoint)?;
    if coords[lead] != 1 {
        let inv = fp.inv(coords[lead]).expect("leading coordinate nonzero");
        for c in coords.iter_mut() {
            *c = fp.mul(*c, inv);
        }
    }
    Ok(())
}

/// Homogeneous polynomial map whose parameters split into projective blocks.
///
/// Plain varieties have a single block; coordinatewise products carry one
/// block per factor, and the components are homogeneous of a fixed degree in
/// each block separately.
#[derive(Debug, Clone)]
pub struct ParamMap {
    pub names: Vec<String>,
    pub block_sizes: Vec<usize>,
    pub components: Vec<MultiPoly>,
}

#[derive(Debug, Clone)]
pub enum Repr {
    Param(ParamMap),
    Implicit {
        generators: Vec<MultiPoly>,
        declared_dim: usize,
        known_point: Option<ProjectivePoint>,
    },
}

/// A subvariety of `P^n` over a fixed prime field.
#[derive(Debug, Clone)]
pub struct Variety {
    name: String,
    ambient: usize,
    repr: Repr,
}

/// A sampled point, together with the parameter vector that produced it
/// when the variety is parametrized.
#[derive(Debug, Clone)]
pub struct SamplePoint {
    pub point: ProjectivePoint,
    pub params: Option<Vec<u64>>,
}

/// Matrix whose column span is the tangent space of the affine cone at the
/// base point; the base point's coordinate vector lies in the span.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    pub base: ProjectivePoint,
    pub frame: Matrix,
}

impl TangentFrame {
    /// Projective dimension this frame witnesses: column rank minus one.
    pub fn projective_dim(&self, fp: &Fp) -> usize {
        self.frame.rank(fp).saturating_sub(1)
    }
}

/// Indices `i` with the variety contained in the hyperplane `x_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateSupport {
    pub contained_in: Vec<usize>,
}

impl CoordinateSupport {
    /// True when the variety lies inside the union of coordinate
    /// hyperplanes, the locus where coordinatewise products degenerate.
    pub fn is_degenerate(&self) -> bool {
        !self.contained_in.is_empty()
    }
}

impl Variety {
    /// Parametrized variety with a single parameter block.
    pub fn param(
        name: impl Into<String>,
        ambient: usize,
        names: Vec<String>,
        components: Vec<MultiPoly>,
    ) -> Result<Self, VarietyError> {
        let m = names.len();
        Self::param_blocked(name, ambient, names, vec![m], components)
    }

    /// Parametrized variety with explicit parameter blocks.
    pub fn param_blocked(
        name: impl Into<String>,
        ambient: usize,
        names: Vec<String>,
        block_sizes: Vec<usize>,
        components: Vec<MultiPoly>,
    ) -> Result<Self, VarietyError> {
        let name = name.into();
        let m = names.len();
        if block_sizes.iter().sum::<usize>() != m || block_sizes.iter().any(|&b| b == 0) {
            return Err(VarietyError::BadDescription(format!(
                "parameter blocks of `{name}` do not partition the {m} parameters"
            )));
        }
        if components.len() != ambient + 1 {
            return Err(VarietyError::BadDescription(format!(
                "`{name}` needs {} components for P^{ambient}, got {}",
                ambient + 1,
                components.len()
            )));
        }
        if components.iter().any(|c| c.nvars() != m) {
            return Err(VarietyError::BadDescription(format!(
                "components of `{name}` must all use {m} parameters"
            )));
        }
        let mut common: Option<Vec<u32>> = None;
        for c in &components {
            if c.is_zero() {
                continue;
            }
            let Some(md) = c.multidegree(&block_sizes) else {
                return Err(VarietyError::BadDescription(format!(
                    "components of `{name}` must be homogeneous in each parameter block"
                )));
            };
            match &common {
                None => common = Some(md),
                Some(prev) if *prev == md => {}
                Some(_) => {
                    return Err(VarietyError::BadDescription(format!(
                        "components of `{name}` must share one multidegree"
                    )))
                }
            }
        }
        if common.is_none() {
            return Err(VarietyError::BadDescription(format!(
                "`{name}` has no nonzero component; its image is empty"
            )));
        }
        Ok(Variety {
            name,
            ambient,
            repr: Repr::Param(ParamMap { names, block_sizes, components }),
        })
    }

    pub fn implicit(
        name: impl Into<String>,
        ambient: usize,
        generators: Vec<MultiPoly>,
        declared_dim: usize,
        known_point: Option<ProjectivePoint>,
    ) -> Result<Self, VarietyError> {
        let name = name.into();
        if generators.is_empty() {
            return Err(VarietyError::BadDescription(format!(
                "`{name}` needs at least one generator"
            )));
        }
        if generators.iter().any(|g| g.nvars() != ambient + 1) {
            return Err(VarietyError::BadDescription(format!(
                "generators of `{name}` must use x0..x{ambient}"
            )));
        }
        for g in &generators {
            if g.is_zero() || g.homogeneous_degree().is_none() {
                return Err(VarietyError::BadDescription(format!(
                    "generators of `{name}` must be nonzero and homogeneous"
                )));
            }
        }
        if declared_dim >= ambient {
            return Err(VarietyError::BadDescription(format!(
                "declared dimension of `{name}` must lie in [0, {})",
                ambient
            )));
        }
        if let Some(pt) = &known_point {
            if pt.coords().len() != ambient + 1 {
                return Err(VarietyError::BadDescription(format!(
                    "known point of `{name}` must have {} coordinates",
                    ambient + 1
                )));
            }
        }
        Ok(Variety {
            name,
            ambient,
            repr: Repr::Implicit { generators, declared_dim, known_point },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn param_map(&self) -> Option<&ParamMap> {
        match &self.repr {
            Repr::Param(map) => Some(map),
            Repr::Implicit { .. } => None,
        }
    }

    /// A generic point. Parametrized varieties evaluate the map at random
    /// parameters (resampling off the base locus); implicit hypersurfaces
    /// slice with random lines and take a root; other implicit varieties
    /// fall back to the known point.
    pub fn sample_point(&self, fp: &Fp, stream: &mut SeedStream) -> Result<SamplePoint, VarietyError> {
        match &self.repr {
            Repr::Param(map) => {
                for _ in 0..SAMPLE_RETRIES {
                    let params: Vec<u64> =
                        (0..map.names.len()).map(|_| fp.random_elem(stream)).collect();
                    let mut coords = Vec::with_capacity(self.ambient + 1);
                    for c in &map.components {
                        coords.push(c.evaluate(&params, fp)?);
                    }
                    if coords.iter().any(|&c| c != 0) {
                        let point = ProjectivePoint::new(coords, fp)?;
                        return Ok(SamplePoint { point, params: Some(params) });
                    }
                }
                Err(VarietyError::NoPointFound { name: self.name.clone(), retries: SAMPLE_RETRIES })
            }
            Repr::Implicit { generators, known_point, .. } => {
                if generators.len() == 1 {
                    for _ in 0..SAMPLE_RETRIES {
                        let a: Vec<u64> =
                            (0..=self.ambient).map(|_| fp.random_elem(stream)).collect();
                        let b: Vec<u64> =
                            (0..=self.ambient).map(|_| fp.random_elem(stream)).collect();
                        if let Some(point) =
                            hypersurface_point_on_line(&generators[0], &a, &b, fp, stream)
                        {
                            return Ok(SamplePoint { point, params: None });
                        }
                    }
                    return Err(VarietyError::NoPointFound {
                        name: self.name.clone(),
                        retries: SAMPLE_RETRIES,
                    });
                }
                match known_point {
                    Some(pt) => Ok(SamplePoint { point: pt.clone(), params: None }),
                    None => Err(VarietyError::UnsupportedRepresentation { name: self.name.clone() }),
                }
            }
        }
    }

    /// Tangent frame of the affine cone at a sampled point.
    ///
    /// Parametrized: columns are the partials of the map at the parameter
    /// vector; the Euler relation already puts the point in their span, and
    /// a rank check guards the rare characteristics where it would not be.
    /// Implicit: the right kernel of the generator Jacobian.
    pub fn tangent_frame(&self, at: &SamplePoint, fp: &Fp) -> Result<TangentFrame, VarietyError> {
        match &self.repr {
            Repr::Param(map) => {
                let params = at.params.as_ref().ok_or_else(|| {
                    VarietyError::BadDescription(format!(
                        "tangent frame of parametrized `{}` needs the parameter vector",
                        self.name
                    ))
                })?;
                let jac = poly::jacobian(&map.components, params, fp)?;
                let pt_col = Matrix::from_columns(vec![at.point.coords().to_vec()]);
                let frame = if jac.hconcat(&pt_col).rank(fp) > jac.rank(fp) {
                    jac.hconcat(&pt_col)
                } else {
                    jac
                };
                Ok(TangentFrame { base: at.point.clone(), frame })
            }
            Repr::Implicit { generators, declared_dim, .. } => {
                let jac = poly::jacobian(generators, at.point.coords(), fp)?;
                let frame = jac.kernel_basis(fp);
                if frame.cols() != declared_dim + 1 {
                    return Err(VarietyError::SingularPoint {
                        name: self.name.clone(),
                        got: frame.cols(),
                        declared: *declared_dim,
                        expected: declared_dim + 1,
                    });
                }
                Ok(TangentFrame { base: at.point.clone(), frame })
            }
        }
    }

    /// Dimension observed from tangent ranks: the max over `trials` random
    /// samples for parametrized varieties (a certified lower bound that is
    /// exact with overwhelming probability), the cross-checked declared
    /// dimension for implicit ones.
    pub fn intrinsic_dim(
        &self,
        trials: usize,
        fp: &Fp,
        stream: &mut SeedStream,
    ) -> Result<usize, VarietyError> {
        match &self.repr {
            Repr::Param(_) => {
                let mut best = 0usize;
                for t in 0..trials.max(1) {
                    let mut s = stream.child(t as u64);
                    let at = self.sample_point(fp, &mut s)?;
                    let frame = self.tangent_frame(&at, fp)?;
                    best = best.max(frame.projective_dim(fp));
                }
                Ok(best)
            }
            Repr::Implicit { declared_dim, .. } => {
                let mut s = stream.child(0);
                let at = self.sample_point(fp, &mut s)?;
                self.tangent_frame(&at, fp)?; // errors if the declared dimension fails
                Ok(*declared_dim)
            }
        }
    }

    /// Which coordinate hyperplanes contain the variety. Exact for
    /// parametrized varieties (a component is the zero polynomial), sampled
    /// for implicit ones.
    pub fn coordinate_support(
        &self,
        samples: usize,
        fp: &Fp,
        stream: &mut SeedStream,
    ) -> Result<CoordinateSupport, VarietyError> {
        match &self.repr {
            Repr::Param(map) => Ok(CoordinateSupport {
                contained_in: (0..=self.ambient)
                    .filter(|&i| map.components[i].is_zero())
                    .collect(),
            }),
            Repr::Implicit { .. } => {
                let mut alive: Vec<bool> = vec![true; self.ambient + 1];
                for t in 0..samples.max(1) {
                    let mut s = stream.child(t as u64);
                    let at = self.sample_point(fp, &mut s)?;
                    for (i, &c) in at.point.coords().iter().enumerate() {
                        if c != 0 {
                            alive[i] = false;
                        }
                    }
                }
                Ok(CoordinateSupport {
                    contained_in: (0..=self.ambient).filter(|&i| alive[i]).collect(),
                })
            }
        }
    }

    /// The image `g(X)` under an invertible coordinate change.
    pub fn apply_transform(&self, g: &Matrix, fp: &Fp) -> Result<Variety, VarietyError> {
        let side = self.ambient + 1;
        if g.rows() != side || g.cols() != side {
            return Err(VarietyError::SingularTransform { side });
        }
        let g_inv = g.inverse(fp).ok_or(VarietyError::SingularTransform { side })?;
        let name = format!("g({})", self.name);
        match &self.repr {
            Repr::Param(map) => {
                // components become g * (component vector)
                let components: Vec<MultiPoly> = (0..side)
                    .map(|i| {
                        let mut acc = MultiPoly::zero(map.names.len());
                        for (j, comp) in map.components.iter().enumerate() {
                            acc = acc.add(&comp.scale(g.get(i, j), fp), fp);
                        }
                        acc
                    })
                    .collect();
                Variety::param_blocked(
                    name,
                    self.ambient,
                    map.names.clone(),
                    map.block_sizes.clone(),
                    components,
                )
            }
            Repr::Implicit { generators, declared_dim, known_point } => {
                let generators = generators
                    .iter()
                    .map(|gen| poly::substitute_linear(gen, &g_inv, fp))
                    .collect::<Result<Vec<_>, _>>()?;
                let known_point = match known_point {
                    Some(pt) => Some(ProjectivePoint::new(g.mul_vec(pt.coords(), fp), fp)?),
                    None => None,
                };
                Variety::implicit(name, self.ambient, generators, *declared_dim, known_point)
            }
        }
    }
}

/// Solve `gen = 0` on the line `a + u*b`; `None` when the restriction is
/// identically zero, rootless, or only meets the line at the zero vector.
pub(crate) fn hypersurface_point_on_line(
    gen: &MultiPoly,
    a: &[u64],
    b: &[u64],
    fp: &Fp,
    stream: &mut SeedStream,
) -> Option<ProjectivePoint> {
    let restricted: UniPoly = poly::restrict_to_line(gen, a, b, fp);
    if restricted.is_zero() {
        return None;
    }
    let roots = restricted.roots(fp, stream);
    if roots.is_empty() {
        return None;
    }
    let u = roots[stream.below(roots.len() as u64) as usize];
    let coords: Vec<u64> = a
        .iter()
        .zip(b)
        .map(|(&ai, &bi)| fp.add(ai, fp.mul(u, bi)))
        .collect();
    ProjectivePoint::new(coords, fp).ok()
}

// ---------------------------------------------------------------------------
// Variety description files
// ---------------------------------------------------------------------------

/// Prime-independent variety description: integer-coefficient polynomials
/// plus the header fields of the textual file format. Reduce with
/// [`VarietySpec::instantiate`] once a working prime is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    pub name: String,
    pub ambient: usize,
    pub kind: SpecKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecKind {
    Param { params: Vec<String>, polys: Vec<IntPoly> },
    Implicit { polys: Vec<IntPoly>, declared_dim: usize, known_point: Option<Vec<i64>> },
}

impl VarietySpec {
    /// Parse the one-variety-per-file textual format.
    pub fn parse(text: &str) -> Result<Self, VarietyError> {
        let bad = |msg: String| VarietyError::BadDescription(msg);
        let mut name: Option<String> = None;
        let mut ambient: Option<usize> = None;
        let mut kind: Option<String> = None;
        let mut params: Option<Vec<String>> = None;
        let mut declared_dim: Option<usize> = None;
        let mut known_point: Option<Vec<i64>> = None;
        let mut poly_lines: Vec<String> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let ctx = |what: &str| format!("line {}: {}", lineno + 1, what);
            match key {
                "name" => name = Some(rest.to_string()),
                "n" => {
                    ambient = Some(
                        rest.parse::<usize>()
                            .map_err(|_| bad(ctx("`n` must be an integer")))?,
                    )
                }
                "kind" => kind = Some(rest.to_string()),
                "params" => {
                    params = Some(rest.split_whitespace().map(str::to_string).collect())
                }
                "declared_dim" => {
                    declared_dim = Some(
                        rest.parse::<usize>()
                            .map_err(|_| bad(ctx("`declared_dim` must be an integer")))?,
                    )
                }
                "known_point" => {
                    known_point = Some(
                        rest.split_whitespace()
                            .map(|t| t.parse::<i64>())
                            .collect::<Result<_, _>>()
                            .map_err(|_| bad(ctx("`known_point` must list integers")))?,
                    )
                }
                "poly" => poly_lines.push(rest.to_string()),
                other => return Err(bad(ctx(&format!("unknown field `{other}`")))),
            }
        }

        let name = name.ok_or_else(|| bad("missing `name`".into()))?;
        let ambient = ambient.ok_or_else(|| bad("missing `n`".into()))?;
        if ambient == 0 {
            return Err(bad("`n` must be at least 1".into()));
        }
        let kind = kind.ok_or_else(|| bad("missing `kind`".into()))?;
        match kind.as_str() {
            "param" => {
                let params = params.ok_or_else(|| bad("param variety needs `params`".into()))?;
                if params.is_empty() {
                    return Err(bad("`params` must list at least one name".into()));
                }
                let vars: Vec<&str> = params.iter().map(String::as_str).collect();
                let polys = poly_lines
                    .iter()
                    .map(|t| IntPoly::parse(t, &vars))
                    .collect::<Result<Vec<_>, _>>()?;
                if polys.len() != ambient + 1 {
                    return Err(bad(format!(
                        "param variety in P^{ambient} needs {} `poly` lines, got {}",
                        ambient + 1,
                        polys.len()
                    )));
                }
                Ok(VarietySpec { name, ambient, kind: SpecKind::Param { params, polys } })
            }
            "implicit" => {
                let declared_dim =
                    declared_dim.ok_or_else(|| bad("implicit variety needs `declared_dim`".into()))?;
                let vars: Vec<String> = (0..=ambient).map(|i| format!("x{i}")).collect();
                let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
                let polys = poly_lines
                    .iter()
                    .map(|t| IntPoly::parse(t, &vars))
                    .collect::<Result<Vec<_>, _>>()?;
                if polys.is_empty() {
                    return Err(bad("implicit variety needs at least one `poly`".into()));
                }
                if let Some(pt) = &known_point {
                    if pt.len() != ambient + 1 {
                        return Err(bad(format!(
                            "known_point needs {} coordinates",
                            ambient + 1
                        )));
                    }
                }
                Ok(VarietySpec {
                    name,
                    ambient,
                    kind: SpecKind::Implicit { polys, declared_dim, known_point },
                })
            }
            other => Err(bad(format!("kind must be `param` or `implicit`, got `{other}`"))),
        }
    }

    /// Canonical file text; `parse(format(spec)) == spec`, byte for byte on
    /// files written by this formatter.
    pub fn format(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name {}\n", self.name));
        out.push_str(&format!("n {}\n", self.ambient));
        match &self.kind {
            SpecKind::Param { params, polys } => {
                out.push_str("kind param\n");
                out.push_str(&format!("params {}\n", params.join(" ")));
                let vars: Vec<&str> = params.iter().map(String::as_str).collect();
                for p in polys {
                    out.push_str(&format!("poly {}\n", p.format(&vars)));
                }
            }
            SpecKind::Implicit { polys, declared_dim, known_point } => {
                out.push_str("kind implicit\n");
                out.push_str(&format!("declared_dim {declared_dim}\n"));
                let vars: Vec<String> = (0..=self.ambient).map(|i| format!("x{i}")).collect();
                let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
                for p in polys {
                    out.push_str(&format!("poly {}\n", p.format(&vars)));
                }
                if let Some(pt) = known_point {
                    let words: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
                    out.push_str(&format!("known_point {}\n", words.join(" ")));
                }
            }
        }
        out
    }

    /// Reduce the description mod a concrete prime.
    pub fn instantiate(&self, fp: &Fp) -> Result<Variety, VarietyError> {
        match &self.kind {
            SpecKind::Param { params, polys } => Variety::param(
                self.name.clone(),
                self.ambient,
                params.clone(),
                polys.iter().map(|p| p.reduce(fp)).collect(),
            ),
            SpecKind::Implicit { polys, declared_dim, known_point } => {
                let known_point = match known_point {
                    Some(pt) => Some(ProjectivePoint::new(
                        pt.iter().map(|&c| fp.elem(c as i128)).collect(),
                        fp,
                    )?),
                    None => None,
                };
                Variety::implicit(
                    self.name.clone(),
                    self.ambient,
                    polys.iter().map(|p| p.reduce(fp)).collect(),
                    *declared_dim,
                    known_point,
                )
            }
        }
    }
}
