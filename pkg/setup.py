from setuptools import setup, find_packages

setup(
    name='pynlkf',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'scipy',
        'pycryptodome',
        'pandas',
        'matplotlib',
        'PyYAML',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['pynlkf=pynlkf.cli.main:main'],
    },
    description='Nonlinear Kalman filters with covariance recalibration, benchmark systems and Monte Carlo harness'
)
