import sys

try:
    from tqdm import tqdm
except ImportError:

    class tqdm(object):
        def __init__(self, iterable=None, *args, **kwargs):
            self.iterable = iterable

        def __iter__(self):
            return iter(self.iterable)

        def __enter__(self):
            return self

        def __exit__(self, *args):
            return False

        def update(self, n=1):
            pass

        def write(self, s):
            sys.stderr.write(s)
