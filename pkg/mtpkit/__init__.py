"""
Discovery of maximal transformable patterns in point sets, compression of point sets
into occurrence-set encodings, and compression-distance classification.
"""
from mtpkit.discovery import MTPRecord, maximal_transformable_patterns, mtp_oracle, total_symmetries
from mtpkit.encoder import Encoding, MTPEncoder, OccurrenceSet, decode, encode_point_set
from mtpkit.errors import MtpkitError
from mtpkit.geometry import Dataset
from mtpkit.ncd import Corpus, classify, distance_matrix, ncd, one_nn_loocv
from mtpkit.transforms import Transformation, get_transformation_class

__all__ = [
    "Corpus", "Dataset", "Encoding", "MTPEncoder", "MTPRecord", "MtpkitError", "OccurrenceSet",
    "Transformation", "classify", "decode", "distance_matrix", "encode_point_set",
    "get_transformation_class", "maximal_transformable_patterns", "mtp_oracle", "ncd",
    "one_nn_loocv", "total_symmetries",
]
