use crate::complex::TwoComplex;
use crate::error::{Error, Result};
use crate::hypergraph::Vertex;

/// The disk `{v w_i w_{i+1}, v' w_i w_{i+1} : 0 <= i < k}` over the path
/// `w_0 ... w_k`. Its boundary is the 4-cycle `v w_0 v' w_k`; it is
/// boundary-inducing exactly when `k >= 2`.
pub fn pyramid_disk(v: Vertex, v2: Vertex, path: &[Vertex]) -> Result<TwoComplex> {
    if v == v2 {
        return Err(Error::RepeatedVertex(v));
    }
    if path.len() < 2 {
        return Err(Error::InvalidParameter(
            "pyramid path needs at least one edge".into(),
        ));
    }
    for (i, &x) in path.iter().enumerate() {
        if x == v || x == v2 || path[..i].contains(&x) {
            return Err(Error::RepeatedVertex(x));
        }
    }
    Ok(TwoComplex::new(
        path.windows(2)
            .flat_map(|w| [[v, w[0], w[1]], [v2, w[0], w[1]]]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexKind;

    #[test]
    fn length_two_pyramid() {
        // v=0, v'=1, path a b c = 2 3 4
        let d = pyramid_disk(0, 1, &[2, 3, 4]).unwrap();
        assert_eq!(d.triangles(), &[[0, 2, 3], [0, 3, 4], [1, 2, 3], [1, 3, 4]]);
        let c = d.classify();
        assert_eq!((c.kind, c.euler), (ComplexKind::Disk, 1));
        // boundary v a v' c
        assert_eq!(d.boundary().cycle, Some(vec![0, 2, 1, 4]));
        assert_eq!(d.is_boundary_inducing(), Ok(true));
    }

    #[test]
    fn length_one_pyramid_has_chord() {
        let d = pyramid_disk(0, 1, &[2, 3]).unwrap();
        assert_eq!(d.triangles().len(), 2);
        assert_eq!(d.classify().kind, ComplexKind::Disk);
        assert_eq!(d.is_boundary_inducing(), Ok(false));
    }

    #[test]
    fn face_count_is_twice_length() {
        let d = pyramid_disk(10, 11, &[0, 1, 2, 3]).unwrap();
        assert_eq!(d.triangles().len(), 6);
    }

    #[test]
    fn rejects_bad_paths() {
        assert!(pyramid_disk(0, 0, &[1, 2]).is_err());
        assert!(pyramid_disk(0, 1, &[2, 3, 2]).is_err());
        assert!(pyramid_disk(0, 1, &[2, 0, 3]).is_err());
        assert!(pyramid_disk(0, 1, &[2]).is_err());
    }
}
