//! Matrix and permutation files.
//!
//! Binary: `BMF2`, version byte `0x01`, `nrows` and `ncols` as little-endian
//! `u64`, then the packed row words, little-endian, padding bits zero.
//!
//! ASCII: a `<nrows> <ncols>` line followed by one line of `0`/`1` per row.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::row;

pub const MAGIC: &[u8; 4] = b"BMF2";
pub const VERSION: u8 = 0x01;

/// Payload words read at a time.
const READ_CHUNK_WORDS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Ascii,
    Binary,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ascii" | "txt" => Ok(Format::Ascii),
            "bin" | "binary" => Ok(Format::Binary),
            _ => Err(Error::Format(format!("unknown format {s:?}"))),
        }
    }
}

pub fn write_binary<W: Write>(mut w: W, a: &BitMatrix) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&(a.nrows() as u64).to_le_bytes())?;
    w.write_all(&(a.ncols() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(a.stride() * 8);
    for i in 0..a.nrows() {
        buf.clear();
        for x in a.row(i) {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<BitMatrix> {
    let mut head = [0u8; 4];
    read_exact(&mut r, &mut head, "magic")?;
    if &head != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    read_binary_body(r)
}

fn read_binary_body<R: Read>(mut r: R) -> Result<BitMatrix> {
    let mut version = [0u8; 1];
    read_exact(&mut r, &mut version, "version")?;
    if version[0] != VERSION {
        return Err(Error::Format(format!("unsupported version {:#04x}", version[0])));
    }
    let nrows = read_dim(&mut r, "nrows")?;
    let ncols = read_dim(&mut r, "ncols")?;
    let total = nrows
        .checked_mul(row::words_for(ncols))
        .filter(|t| t.checked_mul(8).is_some())
        .ok_or_else(|| Error::Format(format!("{nrows}x{ncols} is too large")))?;
    let mut words = Vec::with_capacity(total.min(READ_CHUNK_WORDS));
    let mut buf = vec![0u8; READ_CHUNK_WORDS.min(total) * 8];
    while words.len() < total {
        let n = (total - words.len()).min(READ_CHUNK_WORDS);
        read_exact(&mut r, &mut buf[..n * 8], "payload")?;
        words.extend(buf[..n * 8].chunks_exact(8).map(|b| u64::from_le_bytes(b.try_into().unwrap())));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    BitMatrix::from_words(nrows, ncols, words)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(format!("truncated {what}")),
        _ => Error::Io(e),
    })
}

fn read_dim<R: Read>(r: &mut R, what: &str) -> Result<usize> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b, what)?;
    usize::try_from(u64::from_le_bytes(b)).map_err(|_| Error::Format(format!("{what} does not fit in memory")))
}

pub fn write_ascii<W: Write>(mut w: W, a: &BitMatrix) -> Result<()> {
    writeln!(w, "{} {}", a.nrows(), a.ncols())?;
    let mut line = Vec::with_capacity(a.ncols() + 1);
    for i in 0..a.nrows() {
        line.clear();
        let r = a.row(i);
        line.extend((0..a.ncols()).map(|j| b'0' + row::get_bit(r, j) as u8));
        line.push(b'\n');
        w.write_all(&line)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ascii<R: BufRead>(r: R) -> Result<BitMatrix> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty file".into()))??;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [nrows, ncols] = dims[..] else {
        return Err(Error::Format(format!("bad header {header:?}")));
    };
    let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Format(format!("bad dimension {s:?}: {e}")));
    let (nrows, ncols) = (parse(nrows)?, parse(ncols)?);
    if nrows.checked_mul(row::words_for(ncols)).is_none() {
        return Err(Error::Format(format!("{nrows}x{ncols} is too large")));
    }
    let mut rows = Vec::new();
    for i in 0..nrows {
        let line = lines.next().ok_or_else(|| Error::Format(format!("missing row {i}")))??;
        let line = line.trim_end_matches('\r');
        if line.len() != ncols {
            return Err(Error::Format(format!("row {i} has {} entries, expected {ncols}", line.len())));
        }
        let mut words = vec![0u64; row::words_for(ncols)];
        for (j, ch) in line.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => row::set_bit(&mut words, j, true),
                _ => return Err(Error::Format(format!("unexpected {:?} in row {i}", ch as char))),
            }
        }
        rows.extend(words);
    }
    for line in lines {
        if !line?.trim().is_empty() {
            return Err(Error::Format(format!("more than {nrows} rows")));
        }
    }
    BitMatrix::from_words(nrows, ncols, rows)
}

/// Reads either format, telling them apart by the magic bytes.
pub fn read_matrix<R: Read>(r: R) -> Result<BitMatrix> {
    read_matrix_detect(r).map(|(a, _)| a)
}

/// Like [`read_matrix`], also reporting which format was found.
pub fn read_matrix_detect<R: Read>(r: R) -> Result<(BitMatrix, Format)> {
    let mut r = BufReader::new(r);
    let mut head = Vec::with_capacity(MAGIC.len());
    (&mut r).take(MAGIC.len() as u64).read_to_end(&mut head)?;
    if head == MAGIC {
        Ok((read_binary_body(r)?, Format::Binary))
    } else {
        Ok((read_ascii(head.chain(r))?, Format::Ascii))
    }
}

pub fn write_matrix<W: Write>(w: W, a: &BitMatrix, format: Format) -> Result<()> {
    match format {
        Format::Ascii => write_ascii(w, a),
        Format::Binary => write_binary(w, a),
    }
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<BitMatrix> {
    read_matrix(File::open(path)?)
}

pub fn load_matrix_detect(path: impl AsRef<Path>) -> Result<(BitMatrix, Format)> {
    read_matrix_detect(File::open(path)?)
}

pub fn save_matrix(path: impl AsRef<Path>, a: &BitMatrix, format: Format) -> Result<()> {
    write_matrix(BufWriter::new(File::create(path)?), a, format)
}

/// One line of space-separated transposition targets.
pub fn write_permutation<W: Write>(mut w: W, p: &Permutation) -> Result<()> {
    writeln!(w, "{p}")?;
    w.flush()?;
    Ok(())
}

pub fn read_permutation<R: Read>(mut r: R) -> Result<Permutation> {
    let mut s = String::new();
    r.read_to_string(&mut s)?;
    s.parse()
}

pub fn save_permutation(path: impl AsRef<Path>, p: &Permutation) -> Result<()> {
    write_permutation(BufWriter::new(File::create(path)?), p)
}

pub fn load_permutation(path: impl AsRef<Path>) -> Result<Permutation> {
    read_permutation(File::open(path)?)
}
