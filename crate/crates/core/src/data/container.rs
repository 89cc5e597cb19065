//! Binary container shared by datasets, feature maps and models.
//!
//! ```text
//! offset  size      field
//! 0       8         magic "RFFKIT01"
//! 8       4         u32 format version (1)
//! 12      4         u32 kind: 1 dataset, 2 model, 3 feature map
//! 16      4         u32 section count
//! 20      ...       sections
//! end-4   4         u32 CRC-32 (IEEE) of every preceding byte
//!
//! section:
//!         4         ASCII tag
//!         4         u32 dtype: 1 f64, 2 f32, 3 u32, 4 u64, 5 u8
//!         4         u32 ndim
//!         8·ndim    u64 dims
//!         ...       elements, column-major for ndim = 2
//! ```
//!
//! All integers and floats are little-endian.

use std::collections::HashMap;
use std::path::Path;

use ndarray::{Array1, Array2, ShapeBuilder};

use super::Dataset;
use crate::error::{Error, Result};
use crate::kernels::{FeatureMap, KernelSpec, Projection};
use crate::model::{LogisticModel, Parameters};

pub const MAGIC: [u8; 8] = *b"RFFKIT01";
pub const VERSION: u32 = 1;

const HEADER_LEN: usize = 20;
const TRAILER_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u32)]
pub enum ContainerKind {
    Dataset = 1,
    Model = 2,
    FeatureMap = 3,
}

impl ContainerKind {
    fn from_code(code: u32) -> Option<Self> {
        match code {
            1 => Some(ContainerKind::Dataset),
            2 => Some(ContainerKind::Model),
            3 => Some(ContainerKind::FeatureMap),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Payload {
    F64(Vec<f64>),
    F32(Vec<f32>),
    U32(Vec<u32>),
    U64(Vec<u64>),
    U8(Vec<u8>),
}

impl Payload {
    fn code(&self) -> u32 {
        match self {
            Payload::F64(_) => 1,
            Payload::F32(_) => 2,
            Payload::U32(_) => 3,
            Payload::U64(_) => 4,
            Payload::U8(_) => 5,
        }
    }

    fn width(code: u32) -> Option<usize> {
        match code {
            1 | 4 => Some(8),
            2 | 3 => Some(4),
            5 => Some(1),
            _ => None,
        }
    }

    fn write(&self, out: &mut Vec<u8>) {
        match self {
            Payload::F64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
            Payload::F32(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
            Payload::U32(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
            Payload::U64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
            Payload::U8(v) => out.extend_from_slice(v),
        }
    }

    fn read(code: u32, bytes: &[u8]) -> Payload {
        fn chunks<const W: usize>(bytes: &[u8]) -> impl Iterator<Item = [u8; W]> + '_ {
            bytes.chunks_exact(W).map(|c| c.try_into().expect("exact chunk"))
        }
        match code {
            1 => Payload::F64(chunks::<8>(bytes).map(f64::from_le_bytes).collect()),
            2 => Payload::F32(chunks::<4>(bytes).map(f32::from_le_bytes).collect()),
            3 => Payload::U32(chunks::<4>(bytes).map(u32::from_le_bytes).collect()),
            4 => Payload::U64(chunks::<8>(bytes).map(u64::from_le_bytes).collect()),
            _ => Payload::U8(bytes.to_vec()),
        }
    }
}

#[derive(Debug, Clone)]
struct Section {
    tag: [u8; 4],
    dims: Vec<u64>,
    data: Payload,
}

impl Section {
    fn vector(tag: &[u8; 4], data: Payload) -> Self {
        let len = match &data {
            Payload::F64(v) => v.len(),
            Payload::F32(v) => v.len(),
            Payload::U32(v) => v.len(),
            Payload::U64(v) => v.len(),
            Payload::U8(v) => v.len(),
        };
        Section { tag: *tag, dims: vec![len as u64], data }
    }

    fn matrix(tag: &[u8; 4], m: &Array2<f64>) -> Self {
        // column-major: transpose iteration order
        let data = m.t().iter().copied().collect();
        Section { tag: *tag, dims: vec![m.nrows() as u64, m.ncols() as u64], data: Payload::F64(data) }
    }

    fn tag_str(&self) -> String {
        String::from_utf8_lossy(&self.tag).into_owned()
    }

    fn shape2(&self) -> Result<(usize, usize)> {
        match self.dims[..] {
            [r, c] => Ok((r as usize, c as usize)),
            _ => Err(Error::Format(format!("section {} is not 2-D", self.tag_str()))),
        }
    }

    fn as_f64(&self) -> Result<Vec<f64>> {
        match &self.data {
            Payload::F64(v) => Ok(v.clone()),
            Payload::F32(v) => Ok(v.iter().map(|&x| f64::from(x)).collect()),
            _ => Err(Error::Format(format!("section {} is not floating point", self.tag_str()))),
        }
    }

    fn as_u64(&self) -> Result<Vec<u64>> {
        match &self.data {
            Payload::U64(v) => Ok(v.clone()),
            Payload::U32(v) => Ok(v.iter().map(|&x| u64::from(x)).collect()),
            _ => Err(Error::Format(format!("section {} is not an integer array", self.tag_str()))),
        }
    }

    fn as_matrix(&self) -> Result<Array2<f64>> {
        let shape = self.shape2()?;
        Array2::from_shape_vec(shape.f(), self.as_f64()?).map_err(|e| Error::Format(e.to_string()))
    }
}

fn encode(kind: ContainerKind, sections: &[Section]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(kind as u32).to_le_bytes());
    out.extend_from_slice(&(sections.len() as u32).to_le_bytes());
    for s in sections {
        out.extend_from_slice(&s.tag);
        out.extend_from_slice(&s.data.code().to_le_bytes());
        out.extend_from_slice(&(s.dims.len() as u32).to_le_bytes());
        for d in &s.dims {
            out.extend_from_slice(&d.to_le_bytes());
        }
        s.data.write(&mut out);
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Takes `len` bytes, reporting truncation against the smallest valid
    /// file that could still contain them.
    fn take(&mut self, len: u64) -> Result<&'a [u8]> {
        let actual = self.bytes.len() as u64;
        let end = (self.pos as u64).saturating_add(len);
        if end.saturating_add(TRAILER_LEN as u64) > actual {
            return Err(Error::Truncated { expected: end.saturating_add(TRAILER_LEN as u64), actual });
        }
        let out = &self.bytes[self.pos..end as usize];
        self.pos = end as usize;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

struct Decoded {
    sections: HashMap<[u8; 4], Section>,
}

impl Decoded {
    fn get(&self, tag: &[u8; 4]) -> Result<&Section> {
        self.sections.get(tag).ok_or_else(|| Error::Format(format!("missing section {}", String::from_utf8_lossy(tag))))
    }

    fn scalar_u64(&self, tag: &[u8; 4]) -> Result<u64> {
        let v = self.get(tag)?.as_u64()?;
        v.first().copied().ok_or_else(|| Error::Format(format!("empty section {}", String::from_utf8_lossy(tag))))
    }
}

fn decode(bytes: &[u8], expected: ContainerKind) -> Result<Decoded> {
    let prefix = &bytes[..bytes.len().min(MAGIC.len())];
    if prefix != &MAGIC[..prefix.len()] {
        return Err(Error::MagicMismatch { expected: MAGIC, found: prefix.to_vec() });
    }
    if bytes.len() < HEADER_LEN + TRAILER_LEN {
        return Err(Error::Truncated { expected: (HEADER_LEN + TRAILER_LEN) as u64, actual: bytes.len() as u64 });
    }
    let mut cur = Cursor { bytes, pos: MAGIC.len() };
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let kind_code = cur.u32()?;
    match ContainerKind::from_code(kind_code) {
        Some(kind) if kind == expected => {}
        Some(kind) => return Err(Error::Format(format!("expected a {expected:?} container, found {kind:?}"))),
        None => return Err(Error::Format(format!("unknown container kind {kind_code}"))),
    }
    let count = cur.u32()?;
    let mut sections = HashMap::new();
    for _ in 0..count {
        let tag: [u8; 4] = cur.take(4)?.try_into().expect("4 bytes");
        let code = cur.u32()?;
        let width = Payload::width(code).ok_or_else(|| Error::Format(format!("unknown dtype code {code}")))?;
        let ndim = cur.u32()?;
        let mut dims = Vec::with_capacity(ndim.min(8) as usize);
        for _ in 0..ndim {
            dims.push(cur.u64()?);
        }
        let elements = dims
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::Format("section size overflows".into()))?;
        let len = elements.checked_mul(width as u64).ok_or_else(|| Error::Format("section size overflows".into()))?;
        let raw = cur.take(len)?;
        let section = Section { tag, dims, data: Payload::read(code, raw) };
        if sections.insert(tag, section).is_some() {
            return Err(Error::Format(format!("duplicate section {}", String::from_utf8_lossy(&tag))));
        }
    }
    let body_end = cur.pos;
    if bytes.len() != body_end + TRAILER_LEN {
        return Err(Error::Format(format!(
            "{} trailing bytes after the last section",
            bytes.len() - body_end - TRAILER_LEN
        )));
    }
    let stored = u32::from_le_bytes(bytes[body_end..].try_into().expect("4 bytes"));
    let computed = crc32fast::hash(&bytes[..body_end]);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    Ok(Decoded { sections })
}

fn usize_list(values: &[usize]) -> Payload {
    Payload::U32(values.iter().map(|&v| v as u32).collect())
}

pub fn encode_dataset(dataset: &Dataset) -> Vec<u8> {
    let mut sections = vec![
        Section::vector(b"NAME", Payload::U8(dataset.name().as_bytes().to_vec())),
        Section::vector(b"NCLS", Payload::U64(vec![dataset.classes() as u64])),
        Section::matrix(b"XDAT", dataset.x()),
        Section::vector(b"YLAB", Payload::U32(dataset.labels().iter().map(|&c| c as u32 + 1).collect())),
    ];
    if let Some(secret) = dataset.relevant() {
        sections.push(Section::vector(b"SECR", usize_list(secret)));
    }
    encode(ContainerKind::Dataset, &sections)
}

pub fn decode_dataset(bytes: &[u8]) -> Result<Dataset> {
    let dec = decode(bytes, ContainerKind::Dataset)?;
    let name = match &dec.get(b"NAME")?.data {
        Payload::U8(v) => String::from_utf8(v.clone()).map_err(|e| Error::Format(e.to_string()))?,
        _ => return Err(Error::Format("NAME must be u8".into())),
    };
    let classes = dec.scalar_u64(b"NCLS")? as usize;
    let x = dec.get(b"XDAT")?.as_matrix()?;
    let raw = dec.get(b"YLAB")?.as_u64()?;
    let mut labels = Vec::with_capacity(raw.len());
    for l in raw {
        if l == 0 || l > classes as u64 {
            return Err(Error::LabelOutOfRange { label: l as i64, classes });
        }
        labels.push(l as usize - 1);
    }
    let mut ds = Dataset::new(name, x, labels, classes)?;
    if let Ok(secret) = dec.get(b"SECR") {
        ds = ds.with_relevant(secret.as_u64()?.into_iter().map(|v| v as usize).collect());
    }
    Ok(ds)
}

fn feature_map_sections(map: &FeatureMap) -> Vec<Section> {
    let (kind, param, k) = match *map.spec() {
        KernelSpec::Gaussian { sigma } => (1, sigma, 0),
        KernelSpec::Laplacian { lambda } => (2, lambda, 0),
        KernelSpec::SparseGaussian { sigma, k } => (3, sigma, k as u64),
    };
    let mut sections = vec![
        Section::vector(b"KIND", Payload::U32(vec![kind])),
        Section::vector(b"KPAR", Payload::F64(vec![param])),
        Section::vector(b"KSPK", Payload::U64(vec![k])),
        Section::vector(b"FDIM", Payload::U64(vec![map.input_dim() as u64, map.num_features() as u64])),
        Section::vector(b"FSED", Payload::U64(vec![map.seed()])),
        Section::vector(b"FGEN", Payload::U32(map.generations().to_vec())),
        Section::vector(b"PHAS", Payload::F64(map.phases().to_vec())),
    ];
    match map.projection() {
        Projection::Dense(omega) => sections.push(Section::matrix(b"OMEG", omega)),
        Projection::Sparse { k, indices, values } => {
            let (rows, k) = (map.num_features(), *k);
            let idx = Payload::U32((0..k).flat_map(|c| (0..rows).map(move |r| indices[r * k + c] as u32)).collect());
            let val = Payload::F64((0..k).flat_map(|c| (0..rows).map(move |r| values[r * k + c])).collect());
            let dims = vec![rows as u64, k as u64];
            sections.push(Section { tag: *b"SIDX", dims: dims.clone(), data: idx });
            sections.push(Section { tag: *b"SVAL", dims, data: val });
        }
    }
    sections
}

fn feature_map_from(dec: &Decoded) -> Result<FeatureMap> {
    let kind = dec.scalar_u64(b"KIND")?;
    let param = dec.get(b"KPAR")?.as_f64()?.first().copied().unwrap_or(f64::NAN);
    let k = dec.scalar_u64(b"KSPK")? as usize;
    let spec = match kind {
        1 => KernelSpec::Gaussian { sigma: param },
        2 => KernelSpec::Laplacian { lambda: param },
        3 => KernelSpec::SparseGaussian { sigma: param, k },
        other => return Err(Error::Format(format!("unknown kernel code {other}"))),
    };
    let dims = dec.get(b"FDIM")?.as_u64()?;
    let [d, n_features] = dims[..] else {
        return Err(Error::Format("FDIM must hold two entries".into()));
    };
    let (d, n_features) = (d as usize, n_features as usize);
    let seed = dec.scalar_u64(b"FSED")?;
    let generations: Vec<u32> = match &dec.get(b"FGEN")?.data {
        Payload::U32(v) => v.clone(),
        _ => return Err(Error::Format("FGEN must be u32".into())),
    };
    let phases = Array1::from(dec.get(b"PHAS")?.as_f64()?);
    let projection = match spec {
        KernelSpec::SparseGaussian { .. } => {
            let idx = dec.get(b"SIDX")?;
            let val = dec.get(b"SVAL")?;
            if idx.shape2()? != (n_features, k) || val.shape2()? != (n_features, k) {
                return Err(Error::Format("sparse projection shape mismatch".into()));
            }
            let (idx, val) = (idx.as_u64()?, val.as_f64()?);
            let mut indices = vec![0; n_features * k];
            let mut values = vec![0.0; n_features * k];
            for c in 0..k {
                for r in 0..n_features {
                    indices[r * k + c] = idx[c * n_features + r] as usize;
                    values[r * k + c] = val[c * n_features + r];
                }
            }
            Projection::Sparse { k, indices, values }
        }
        _ => Projection::Dense(dec.get(b"OMEG")?.as_matrix()?),
    };
    if phases.len() != n_features {
        return Err(Error::Format(format!("{} phases for {n_features} features", phases.len())));
    }
    FeatureMap::from_parts(spec, d, seed, projection, phases, generations)
}

pub fn encode_feature_map(map: &FeatureMap) -> Vec<u8> {
    encode(ContainerKind::FeatureMap, &feature_map_sections(map))
}

pub fn decode_feature_map(bytes: &[u8]) -> Result<FeatureMap> {
    feature_map_from(&decode(bytes, ContainerKind::FeatureMap)?)
}

pub fn encode_model(model: &LogisticModel, map: &FeatureMap) -> Vec<u8> {
    let mut sections = feature_map_sections(map);
    match model.params() {
        Parameters::Full { theta } => sections.push(Section::matrix(b"THET", theta)),
        Parameters::Bottleneck { u, v } => {
            sections.push(Section::matrix(b"UFAC", u));
            sections.push(Section::matrix(b"VFAC", v));
        }
    }
    encode(ContainerKind::Model, &sections)
}

pub fn decode_model(bytes: &[u8]) -> Result<(LogisticModel, FeatureMap)> {
    let dec = decode(bytes, ContainerKind::Model)?;
    let map = feature_map_from(&dec)?;
    let model = if dec.sections.contains_key(b"THET") {
        LogisticModel::full(dec.get(b"THET")?.as_matrix()?)?
    } else {
        LogisticModel::bottleneck(dec.get(b"UFAC")?.as_matrix()?, dec.get(b"VFAC")?.as_matrix()?)?
    };
    if model.num_features() != map.num_features() {
        return Err(Error::DimensionMismatch { expected: map.num_features(), found: model.num_features() });
    }
    Ok((model, map))
}

pub fn save_binary(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, encode_dataset(dataset))?)
}

pub fn load_binary(path: impl AsRef<Path>) -> Result<Dataset> {
    decode_dataset(&std::fs::read(path)?)
}

pub fn save_model(model: &LogisticModel, map: &FeatureMap, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, encode_model(model, map))?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<(LogisticModel, FeatureMap)> {
    decode_model(&std::fs::read(path)?)
}

pub fn save_feature_map(map: &FeatureMap, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, encode_feature_map(map))?)
}

pub fn load_feature_map(path: impl AsRef<Path>) -> Result<FeatureMap> {
    decode_feature_map(&std::fs::read(path)?)
}
