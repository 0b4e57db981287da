def _union(points, basis):
    if isinstance(points, set):
        points.update(basis)
        return points
    return set(points).union(basis)


class PairBuffer:
    """
    This class implements the pair store that the MTP discovery loop fills: every
    <transformation, basis> pair found while matching object bases against image bases.
    Pairs sharing a transformation are brought together as they arrive, so after the loop
    each transformation's entry already holds the union of its bases, i.e. its MTP.

    Transformations are stored by key (see TransformationClass.solve_key) and basis points
    by their index in the dataset's sorted point list, so a worker's buffer is small to
    ship back to the parent process. Most transformations are found from a single basis;
    their entry stays that basis' index tuple until a second basis arrives.
    """

    def __init__(self):
        """
        Initializes an empty buffer. `mem_counter` counts every stored pair, duplicates
        included, while len() counts distinct transformations.
        """
        self.pair_memory = {}
        self.mem_counter = 0

    def store_pair(self, key, basis):
        """
        Stores one pair.

        Parameters:
        key (tuple): The key of the transformation.
        basis (tuple): Indices of the basis points that the transformation maps into the dataset.
        """
        points = self.pair_memory.get(key)
        self.pair_memory[key] = basis if points is None else _union(points, basis)
        self.mem_counter += 1

    def merge(self, other):
        """Adds the pairs of another buffer (a worker's) to this one and returns self."""
        memory = self.pair_memory
        for key, points in other.pair_memory.items():
            mine = memory.get(key)
            memory[key] = points if mine is None else _union(mine, points)
        self.mem_counter += other.mem_counter
        return self

    def patterns(self, s_min=1):
        """Yields (key, frozenset of point indices) for every transformation mapping at least s_min points."""
        for key, points in self.pair_memory.items():
            if len(points) >= s_min:
                yield key, frozenset(points)

    def __len__(self):
        return len(self.pair_memory)
