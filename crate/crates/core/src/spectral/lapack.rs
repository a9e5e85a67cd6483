//! Thin wrappers over the LAPACK divide-and-conquer symmetric/Hermitian
//! eigensolvers. Inputs are taken in logical (row, col) indexing and copied
//! into column-major buffers.

use std::os::raw::{c_char, c_int};

use lapack_sys::__BindgenComplex;
use ndarray::{Array1, Array2, ShapeBuilder};

use crate::error::{Error, Result};
use crate::C64;

fn job(vectors: bool) -> c_char {
    if vectors {
        b'V' as c_char
    } else {
        b'N' as c_char
    }
}

fn column_major<T: Copy>(a: &Array2<T>) -> Vec<T> {
    a.t().iter().copied().collect()
}

pub(crate) fn real_symmetric(
    a: &Array2<f64>,
    vectors: bool,
) -> Result<(Array1<f64>, Option<Array2<f64>>)> {
    let n = a.nrows();
    let ni = n as c_int;
    let mut buf = column_major(a);
    let mut w = vec![0.0f64; n];
    let uplo = b'L' as c_char;
    let jobz = job(vectors);
    let mut info: c_int = 0;

    let mut work_query = [0.0f64];
    let mut iwork_query: [c_int; 1] = [0];
    let query: c_int = -1;
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &query,
            iwork_query.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { info });
    }
    let lwork = work_query[0] as c_int;
    let liwork = iwork_query[0];
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork: Vec<c_int> = vec![0; liwork.max(1) as usize];
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { info });
    }
    let vecs = if vectors {
        Some(Array2::from_shape_vec((n, n).f(), buf).expect("buffer length n*n"))
    } else {
        None
    };
    Ok((Array1::from(w), vecs))
}

pub(crate) fn hermitian(
    a: &Array2<C64>,
    vectors: bool,
) -> Result<(Array1<f64>, Option<Array2<C64>>)> {
    let n = a.nrows();
    let ni = n as c_int;
    let mut buf = column_major(a);
    let mut w = vec![0.0f64; n];
    let uplo = b'L' as c_char;
    let jobz = job(vectors);
    let mut info: c_int = 0;

    let mut work_query = [C64::new(0.0, 0.0)];
    let mut rwork_query = [0.0f64];
    let mut iwork_query: [c_int; 1] = [0];
    let query: c_int = -1;
    unsafe {
        lapack_sys::zheevd_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr() as *mut __BindgenComplex<f64>,
            &ni,
            w.as_mut_ptr(),
            work_query.as_mut_ptr() as *mut __BindgenComplex<f64>,
            &query,
            rwork_query.as_mut_ptr(),
            &query,
            iwork_query.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { info });
    }
    let lwork = work_query[0].re as c_int;
    let lrwork = rwork_query[0] as c_int;
    let liwork = iwork_query[0];
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
    let mut iwork: Vec<c_int> = vec![0; liwork.max(1) as usize];
    unsafe {
        lapack_sys::zheevd_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr() as *mut __BindgenComplex<f64>,
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr() as *mut __BindgenComplex<f64>,
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { info });
    }
    let vecs = if vectors {
        Some(Array2::from_shape_vec((n, n).f(), buf).expect("buffer length n*n"))
    } else {
        None
    };
    Ok((Array1::from(w), vecs))
}
