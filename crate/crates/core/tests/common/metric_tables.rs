// Reference CE, ENT and ERLL table rows; N/A cells omitted.
/// Model, dataset, column, CE, ENT, ERLL.
const TABLE: &[(&str, &str, &str, f64, f64, f64)] = &[
    ("DNN", "Beng.", "1000/NT", 1.25, 1.23, 2.48),
    ("DNN", "Beng.", "1000/B", 1.26, 1.17, 2.43),
    ("DNN", "Beng.", "1000/R", 1.24, 1.18, 2.43),
    ("DNN", "Beng.", "1000/BR", 1.27, 1.09, 2.37),
    ("DNN", "Beng.", "2000/NT", 1.24, 1.18, 2.42),
    ("DNN", "Beng.", "2000/B", 1.26, 1.13, 2.39),
    ("DNN", "Beng.", "2000/R", 1.26, 1.09, 2.35),
    ("DNN", "Beng.", "2000/BR", 1.32, 0.99, 2.31),
    ("DNN", "Beng.", "4000/NT", 1.24, 1.14, 2.39),
    ("DNN", "Beng.", "4000/B", 1.25, 1.11, 2.37),
    ("DNN", "Beng.", "4000/R", 1.30, 1.02, 2.32),
    ("DNN", "Beng.", "4000/BR", 1.39, 0.91, 2.30),
    ("DNN", "BN-50", "1000/NT", 2.05, 1.95, 3.99),
    ("DNN", "BN-50", "1000/B", 2.05, 1.77, 3.82),
    ("DNN", "BN-50", "1000/R", 2.04, 1.90, 3.94),
    ("DNN", "BN-50", "1000/BR", 2.08, 1.68, 3.76),
    ("DNN", "BN-50", "2000/NT", 2.01, 1.76, 3.77),
    ("DNN", "BN-50", "2000/B", 2.04, 1.68, 3.72),
    ("DNN", "BN-50", "2000/R", 2.05, 1.65, 3.70),
    ("DNN", "BN-50", "2000/BR", 2.22, 1.40, 3.63),
    ("DNN", "BN-50", "4000/NT", 2.00, 1.65, 3.65),
    ("DNN", "BN-50", "4000/B", 2.03, 1.60, 3.63),
    ("DNN", "BN-50", "4000/R", 2.09, 1.48, 3.58),
    ("DNN", "BN-50", "4000/BR", 2.27, 1.27, 3.55),
    ("DNN", "Cant.", "1000/NT", 1.92, 1.71, 3.63),
    ("DNN", "Cant.", "1000/B", 1.96, 1.67, 3.63),
    ("DNN", "Cant.", "1000/R", 1.92, 1.67, 3.58),
    ("DNN", "Cant.", "1000/BR", 1.98, 1.57, 3.56),
    ("DNN", "Cant.", "2000/NT", 1.93, 1.66, 3.59),
    ("DNN", "Cant.", "2000/B", 1.94, 1.64, 3.58),
    ("DNN", "Cant.", "2000/R", 1.97, 1.55, 3.51),
    ("DNN", "Cant.", "2000/BR", 2.06, 1.42, 3.48),
    ("DNN", "Cant.", "4000/NT", 1.92, 1.63, 3.55),
    ("DNN", "Cant.", "4000/B", 1.97, 1.55, 3.52),
    ("DNN", "Cant.", "4000/R", 2.03, 1.43, 3.46),
    ("DNN", "Cant.", "4000/BR", 2.10, 1.38, 3.47),
    ("DNN", "TIMIT", "1000/NT", 1.06, 0.72, 1.77),
    ("DNN", "TIMIT", "1000/B", 1.08, 0.70, 1.77),
    ("DNN", "TIMIT", "1000/R", 1.20, 0.58, 1.77),
    ("DNN", "TIMIT", "1000/BR", 1.28, 0.53, 1.81),
    ("DNN", "TIMIT", "2000/NT", 1.08, 0.63, 1.71),
    ("DNN", "TIMIT", "2000/B", 1.09, 0.63, 1.72),
    ("DNN", "TIMIT", "2000/R", 1.25, 0.50, 1.76),
    ("DNN", "TIMIT", "2000/BR", 1.31, 0.48, 1.79),
    ("DNN", "TIMIT", "4000/NT", 1.10, 0.57, 1.67),
    ("DNN", "TIMIT", "4000/B", 1.11, 0.57, 1.68),
    ("DNN", "TIMIT", "4000/R", 1.25, 0.48, 1.73),
    ("DNN", "TIMIT", "4000/BR", 1.33, 0.45, 1.78),
    ("Kernel", "Beng.", "Laplacian/NT", 1.34, 1.43, 2.77),
    ("Kernel", "Beng.", "Laplacian/B", 1.32, 1.23, 2.55),
    ("Kernel", "Beng.", "Laplacian/R", 1.35, 1.41, 2.76),
    ("Kernel", "Beng.", "Laplacian/BR", 1.39, 1.08, 2.47),
    ("Kernel", "Beng.", "Gaussian/NT", 1.35, 1.36, 2.71),
    ("Kernel", "Beng.", "Gaussian/B", 1.33, 1.31, 2.65),
    ("Kernel", "Beng.", "Gaussian/R", 1.36, 1.35, 2.71),
    ("Kernel", "Beng.", "Gaussian/BR", 1.34, 1.28, 2.62),
    ("Kernel", "Beng.", "Sparse Gaussian/NT", 1.31, 1.35, 2.67),
    ("Kernel", "Beng.", "Sparse Gaussian/B", 1.29, 1.23, 2.52),
    ("Kernel", "Beng.", "Sparse Gaussian/R", 1.34, 1.30, 2.64),
    ("Kernel", "Beng.", "Sparse Gaussian/BR", 1.33, 1.10, 2.44),
    ("Kernel", "Beng. +FS", "Laplacian/NT", 1.28, 1.32, 2.60),
    ("Kernel", "Beng. +FS", "Laplacian/B", 1.26, 1.21, 2.47),
    ("Kernel", "Beng. +FS", "Laplacian/R", 1.29, 1.28, 2.57),
    ("Kernel", "Beng. +FS", "Laplacian/BR", 1.27, 1.14, 2.41),
    ("Kernel", "Beng. +FS", "Gaussian/NT", 1.35, 1.44, 2.79),
    ("Kernel", "Beng. +FS", "Gaussian/B", 1.31, 1.27, 2.58),
    ("Kernel", "Beng. +FS", "Gaussian/R", 1.36, 1.45, 2.80),
    ("Kernel", "Beng. +FS", "Gaussian/BR", 1.35, 1.13, 2.48),
    ("Kernel", "Beng. +FS", "Sparse Gaussian/NT", 1.28, 1.32, 2.60),
    ("Kernel", "Beng. +FS", "Sparse Gaussian/B", 1.26, 1.22, 2.48),
    ("Kernel", "Beng. +FS", "Sparse Gaussian/R", 1.31, 1.26, 2.57),
    ("Kernel", "Beng. +FS", "Sparse Gaussian/BR", 1.27, 1.14, 2.41),
    ("Kernel", "BN-50", "Laplacian/B", 2.15, 1.89, 4.04),
    ("Kernel", "BN-50", "Laplacian/BR", 2.43, 1.46, 3.88),
    ("Kernel", "BN-50", "Gaussian/B", 2.05, 1.83, 3.88),
    ("Kernel", "BN-50", "Gaussian/BR", 2.16, 1.53, 3.69),
    ("Kernel", "BN-50", "Sparse Gaussian/B", 2.05, 1.81, 3.86),
    ("Kernel", "BN-50", "Sparse Gaussian/BR", 2.19, 1.48, 3.67),
    ("Kernel", "BN-50 +FS", "Laplacian/B", 2.01, 1.81, 3.82),
    ("Kernel", "BN-50 +FS", "Laplacian/BR", 2.07, 1.56, 3.63),
    ("Kernel", "BN-50 +FS", "Gaussian/B", 2.04, 1.84, 3.88),
    ("Kernel", "BN-50 +FS", "Gaussian/BR", 2.13, 1.55, 3.67),
    ("Kernel", "BN-50 +FS", "Sparse Gaussian/B", 2.00, 1.80, 3.80),
    ("Kernel", "BN-50 +FS", "Sparse Gaussian/BR", 2.06, 1.57, 3.62),
    ("Kernel", "Cant.", "Laplacian/NT", 1.93, 1.84, 3.77),
    ("Kernel", "Cant.", "Laplacian/B", 1.95, 1.67, 3.62),
    ("Kernel", "Cant.", "Laplacian/R", 1.95, 1.76, 3.71),
    ("Kernel", "Cant.", "Laplacian/BR", 2.04, 1.52, 3.56),
    ("Kernel", "Cant.", "Gaussian/NT", 1.99, 1.94, 3.94),
    ("Kernel", "Cant.", "Gaussian/B", 1.98, 1.73, 3.71),
    ("Kernel", "Cant.", "Gaussian/R", 2.00, 1.91, 3.91),
    ("Kernel", "Cant.", "Gaussian/BR", 2.04, 1.58, 3.62),
    ("Kernel", "Cant.", "Sparse Gaussian/NT", 1.93, 1.77, 3.71),
    ("Kernel", "Cant.", "Sparse Gaussian/B", 1.94, 1.69, 3.63),
    ("Kernel", "Cant.", "Sparse Gaussian/R", 1.95, 1.70, 3.65),
    ("Kernel", "Cant.", "Sparse Gaussian/BR", 2.00, 1.55, 3.54),
    ("Kernel", "Cant. +FS", "Laplacian/NT", 1.88, 1.75, 3.63),
    ("Kernel", "Cant. +FS", "Laplacian/B", 1.90, 1.66, 3.56),
    ("Kernel", "Cant. +FS", "Laplacian/R", 1.89, 1.73, 3.63),
    ("Kernel", "Cant. +FS", "Laplacian/BR", 1.95, 1.54, 3.49),
    ("Kernel", "Cant. +FS", "Gaussian/NT", 1.97, 1.91, 3.88),
    ("Kernel", "Cant. +FS", "Gaussian/B", 1.97, 1.72, 3.69),
    ("Kernel", "Cant. +FS", "Gaussian/R", 1.98, 1.87, 3.86),
    ("Kernel", "Cant. +FS", "Gaussian/BR", 2.03, 1.57, 3.60),
    ("Kernel", "Cant. +FS", "Sparse Gaussian/NT", 1.90, 1.75, 3.64),
    ("Kernel", "Cant. +FS", "Sparse Gaussian/B", 1.91, 1.68, 3.58),
    ("Kernel", "Cant. +FS", "Sparse Gaussian/R", 1.91, 1.72, 3.63),
    ("Kernel", "Cant. +FS", "Sparse Gaussian/BR", 1.96, 1.54, 3.50),
    ("Kernel", "TIMIT", "Laplacian/NT", 0.97, 0.95, 1.92),
    ("Kernel", "TIMIT", "Laplacian/B", 0.99, 0.72, 1.71),
    ("Kernel", "TIMIT", "Laplacian/R", 0.97, 0.91, 1.87),
    ("Kernel", "TIMIT", "Laplacian/BR", 1.07, 0.61, 1.68),
    ("Kernel", "TIMIT", "Gaussian/NT", 0.94, 0.88, 1.82),
    ("Kernel", "TIMIT", "Gaussian/B", 0.96, 0.73, 1.70),
    ("Kernel", "TIMIT", "Gaussian/R", 0.94, 0.86, 1.80),
    ("Kernel", "TIMIT", "Gaussian/BR", 1.02, 0.62, 1.65),
    ("Kernel", "TIMIT", "Sparse Gaussian/NT", 0.94, 0.89, 1.83),
    ("Kernel", "TIMIT", "Sparse Gaussian/B", 0.95, 0.76, 1.71),
    ("Kernel", "TIMIT", "Sparse Gaussian/R", 0.94, 0.85, 1.79),
    ("Kernel", "TIMIT", "Sparse Gaussian/BR", 1.03, 0.61, 1.64),
    ("Kernel", "TIMIT +FS", "Laplacian/NT", 0.92, 0.86, 1.78),
    ("Kernel", "TIMIT +FS", "Laplacian/B", 0.95, 0.70, 1.65),
    ("Kernel", "TIMIT +FS", "Laplacian/R", 0.92, 0.82, 1.74),
    ("Kernel", "TIMIT +FS", "Laplacian/BR", 1.03, 0.58, 1.61),
    ("Kernel", "TIMIT +FS", "Gaussian/NT", 0.93, 0.86, 1.79),
    ("Kernel", "TIMIT +FS", "Gaussian/B", 0.96, 0.70, 1.67),
    ("Kernel", "TIMIT +FS", "Gaussian/R", 0.93, 0.83, 1.76),
    ("Kernel", "TIMIT +FS", "Gaussian/BR", 1.02, 0.61, 1.64),
    ("Kernel", "TIMIT +FS", "Sparse Gaussian/NT", 0.92, 0.84, 1.76),
    ("Kernel", "TIMIT +FS", "Sparse Gaussian/B", 0.96, 0.69, 1.64),
    ("Kernel", "TIMIT +FS", "Sparse Gaussian/R", 0.92, 0.82, 1.74),
    ("Kernel", "TIMIT +FS", "Sparse Gaussian/BR", 1.03, 0.58, 1.61),
];
