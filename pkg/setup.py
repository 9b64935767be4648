from setuptools import setup, find_packages


def parse_requirements(filename):
    """ load requirements from a pip requirements file. (replacing from pip.req import parse_requirements)"""
    content = (line.strip() for line in open(filename))
    return [line for line in content if line and not line.startswith("#")]


setup(
    name='SemiAlgMoments',
    packages=find_packages(exclude=['tests', 'tests.*']),
    version='0.1',
    license='Apache License 2.0',
    description='Truncated moment problems on semi-algebraic sets: positivity checks, fiber decomposition, '
                'quadrature and a certified non-moment functional',
    keywords=['moment problem', 'semi-algebraic set', 'moment matrix', 'localizing matrix', 'quadrature'],
    data_files=['requirements.txt'],
    install_requires=parse_requirements('requirements.txt'),
    extras_require={
        'test': ['pytest>=6.0'],
    },
    entry_points={
        'console_scripts': ['semialg-moments=semialg_moments.cli:main'],
    },
    classifiers=[
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
